// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "inductive/experiment.hpp"
#include "inductive/inductive.hpp"
#include "support.hpp"

using namespace inductive;
namespace ts = inductive::test_support;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::string csv;  // stochastic criteria only; compared byte for byte on rerun

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

std::string num(double v) { return detail::format_double(v); }

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

std::size_t pick(std::mt19937_64& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

std::vector<double> random_alpha(std::mt19937_64& g, std::size_t k, double lo = 0.2, double hi = 4.0) {
  std::vector<double> a(k);
  for (auto& x : a) x = uniform(g, lo, hi);
  return a;
}

std::vector<std::array<double, 2>> random_typed_alpha(std::mt19937_64& g, std::size_t k) {
  std::vector<std::array<double, 2>> a(k);
  for (auto& x : a) x = {uniform(g, 0.2, 3.0), uniform(g, 0.2, 3.0)};
  return a;
}

// Shared stream for the convergence criteria.
const std::vector<std::vector<double>> kFrequencies{{0.8, 0.1, 0.1}, {0.2, 0.4, 0.4}};

StreamConfig criterion8_stream() {
  return StreamConfig{TypeProcess(), {SimplexVector(kFrequencies[0]), SimplexVector(kFrequencies[1])}};
}

// ---------------------------------------------------------------------------

Verdict laplace_reduction() {
  Verdict v;
  const CarnapParams laplace({1.0, 1.0});
  std::size_t checked = 0;
  double worst = 0.0;
  for (std::size_t n = 0; n <= 20; ++n) {
    for (std::size_t ni = 0; ni <= n; ++ni) {
      CountStatistics c(2, 1);
      for (std::size_t r = 0; r < ni; ++r) c.add(0, 0);
      for (std::size_t r = ni; r < n; ++r) c.add(1, 0);
      const SimplexVector p = carnap_predict(c, laplace);
      const double want0 = static_cast<double>(ni + 1) / static_cast<double>(n + 2);
      const double want1 = static_cast<double>(n - ni + 1) / static_cast<double>(n + 2);
      worst = std::max({worst, std::abs(p[0] - want0), std::abs(p[1] - want1)});
      ++checked;
    }
  }
  v.require(worst <= 1e-15, "max error " + num(worst));
  v.detail = v.pass ? std::to_string(checked) + " count vectors, max error " + num(worst) : v.detail;
  return v;
}

Verdict exchangeability_suite() {
  Verdict v;
  std::mt19937_64 g(2);
  const CarnapRule carnap(CarnapParams(random_alpha(g, 3)));
  const SkyrmsRule skyrms(adjacent_pair_mixture(3, 5.0, 1.0));
  const MaherRule maher(MaherParams(0.5, CarnapParams({1.0, 2.0, 0.5, 1.5}), CarnapParams({0.7, 1.3}),
                                    CarnapParams({2.0, 0.4})));
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = check_exchangeability(carnap, 3, 5, 1e-12);
  const auto b = check_exchangeability(skyrms, 3, 5, 1e-12);
  const auto c = check_exchangeability(maher, 4, 5, 1e-12);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.require(a.passed, "carnap max violation " + num(a.max_violation));
  v.require(b.passed, "skyrms max violation " + num(b.max_violation));
  v.require(c.passed, "maher max violation " + num(c.max_violation));
  v.require(secs < 30.0, "took " + num(secs) + " s");
  if (v.pass) {
    v.detail = "max violations carnap " + num(a.max_violation) + ", skyrms " + num(b.max_violation) + ", maher " +
               num(c.max_violation) + " in " + num(std::round(secs * 100) / 100) + " s";
  }
  return v;
}

Verdict polya_chain_equivalence() {
  Verdict v;
  std::mt19937_64 g(3);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const std::size_t k = pick(g, 2, 5);
    const auto alpha = random_alpha(g, k, 0.1, 5.0);
    std::vector<std::size_t> xs(pick(g, 0, 15));
    for (auto& x : xs) x = pick(g, 0, k - 1);
    const double closed = polya_sequence_probability(xs, CarnapParams(alpha));
    const double chained = ts::carnap_chain_oracle(xs, alpha);
    const double via_rule = joint_probability(CarnapRule(CarnapParams(alpha)), xs, std::vector<TypeIndex>(xs.size(), 0));
    // relative error: the probabilities of long sequences are tiny
    worst = std::max({worst, std::abs(closed - chained) / chained, std::abs(via_rule - chained) / chained});
  }
  v.require(worst <= 1e-12, "max relative error " + num(worst));
  if (v.pass) v.detail = "1000 cases, max relative error " + num(worst);
  return v;
}

Verdict de_finetti_mc() {
  Verdict v;
  std::mt19937_64 g(4);
  double worst_z = 0.0;
  v.csv = "case,outcome,estimate,standard_error,exact\n";
  for (int n = 0; n < 20; ++n) {
    const std::size_t k = pick(g, 2, 4);
    const CarnapParams p(random_alpha(g, k, 0.5, 3.0));
    CountStatistics c(k, 1);
    for (Outcome i = 0; i < k; ++i) {
      for (std::size_t r = pick(g, 0, 4); r > 0; --r) c.add(i, 0);
    }
    const McEstimate mc = dirichlet_mc_predictive(p, c, 1'000'000, 1000 + static_cast<std::uint64_t>(n));
    const SimplexVector exact = carnap_predict(c, p);
    for (Outcome i = 0; i < k; ++i) {
      const double z = std::abs(mc.estimate[i] - exact[i]) / mc.standard_error[i];
      worst_z = std::max(worst_z, z);
      v.csv += std::to_string(n) + ',' + std::to_string(i) + ',' + num(mc.estimate[i]) + ',' +
               num(mc.standard_error[i]) + ',' + num(exact[i]) + '\n';
    }
  }
  v.require(worst_z <= 3.0, "largest deviation " + num(worst_z) + " standard errors");
  if (v.pass) v.detail = "20 cases at 10^6 samples, largest deviation " + num(worst_z) + " SE";
  return v;
}

Verdict generalized_partial_exchangeability() {
  Verdict v;
  std::mt19937_64 g(5);
  const std::array<double, 4> grid{0.0, 0.5, 1.0, 2.0};
  std::size_t failing_partial = 0, positive_beta = 0;
  double worst = 0.0;
  for (std::size_t d = 0; d < 25; ++d) {
    // The first 16 draws cover the whole (beta, gamma) grid.
    const double beta = d < 16 ? grid[d / 4] : grid[pick(g, 0, 3)];
    const double gamma = d < 16 ? grid[d % 4] : grid[pick(g, 0, 3)];
    const AnalogicalRule rule(AnalogyParams(random_typed_alpha(g, 3), beta, gamma));
    const auto gen = check_generalized_partial_exchangeability(rule, 3, 5, 1e-12);
    worst = std::max(worst, gen.max_violation);
    v.require(gen.passed, "draw " + std::to_string(d) + " (beta " + num(beta) + ", gamma " + num(gamma) +
                              ") violates the generalized postulate by " + num(gen.max_violation));
    if (beta > 0.0) {
      ++positive_beta;
      const auto part = check_partial_exchangeability(rule, 3, 5, 1e-12);
      bool replayed = !part.passed && !part.witnesses.empty();
      for (const auto& w : part.witnesses) {
        replayed = replayed && w.gap() > 1e-12 && std::abs(replay_witness(rule, w) - w.gap()) <= 1e-12;
      }
      v.require(replayed, "draw " + std::to_string(d) + " (beta " + num(beta) + ") lacks a replayable witness");
      failing_partial += replayed ? 1 : 0;
    }
  }
  if (v.pass) {
    v.detail = "25 draws, max generalized violation " + num(worst) + "; partial fails with replayable witness in " +
               std::to_string(failing_partial) + "/" + std::to_string(positive_beta) + " draws with beta > 0";
  }
  return v;
}

Verdict beta_positivity() {
  Verdict v;
  std::mt19937_64 g(6);
  std::size_t rows = 0;
  for (int d = 0; d <= 100; ++d) {
    const std::size_t k = pick(g, 2, 5);
    // Draw 100 is the boundary beta = 0.
    const double beta = d == 100 ? 0.0 : uniform(g, 0.01, 3.0);
    const AnalogyParams p(random_typed_alpha(g, k), beta, uniform(g, 0.0, 3.0));
    const auto rep = check_beta_positivity(p);
    for (const auto& r : rep.rows) {
      ++rows;
      // independent check of the equivalence from the chained formula
      const double lhs = ts::analogy_chain_oracle({r.outcome, r.outcome}, {1, 0}, p.alpha(), p.beta(), p.gamma()) /
                         ts::analogy_chain_oracle({r.outcome}, {1}, p.alpha(), p.beta(), p.gamma());
      v.require(std::abs(lhs - r.lhs) <= 1e-14, "lhs disagrees with the chained formula");
      v.require(r.equivalence_holds, "equivalence fails at beta " + num(beta));
      if (d == 100) v.require(r.lhs == r.rhs, "boundary beta = 0 gives lhs != rhs");
    }
    v.require(rep.monotone, "lhs not strictly increasing over the sweep");
  }
  if (v.pass) v.detail = "101 draws (" + std::to_string(rows) + " outcome rows), sweep strictly increasing";
  return v;
}

Verdict urn_equivalence() {
  Verdict v;
  const AnalogyParams p({{1.0, 0.5}, {2.0, 1.0}, {0.7, 3.0}}, 0.5, 2.0);
  const std::vector<TypeIndex> pattern{0, 1, 0, 1};
  constexpr std::size_t kRuns = 1'000'000;
  std::map<std::vector<Outcome>, std::size_t> freq;
  for (std::size_t r = 0; r < kRuns; ++r) ++freq[urn_simulate(p, pattern, 7, r)];
  const AnalogicalRule rule(p);
  double tv = 0.0, total_exact = 0.0;
  v.csv = "sequence,empirical,exact\n";
  for (const auto& w : ts::all_words(3, 4)) {
    const double exact = joint_probability(rule, w, pattern);
    const auto it = freq.find(w);
    const double emp = it == freq.end() ? 0.0 : static_cast<double>(it->second) / kRuns;
    tv += std::abs(emp - exact);
    total_exact += exact;
    v.csv += std::to_string(w[0]) + std::to_string(w[1]) + std::to_string(w[2]) + std::to_string(w[3]) + ',' +
             num(emp) + ',' + num(exact) + '\n';
  }
  tv /= 2.0;
  v.require(std::abs(total_exact - 1.0) <= 1e-12, "exact joints do not sum to one");
  v.require(tv < 0.01, "total variation " + num(tv));
  if (v.pass) v.detail = "10^6 runs, total variation " + num(tv);
  return v;
}

Verdict reichenbach_dichotomy() {
  Verdict v;
  const StreamConfig sc = criterion8_stream();
  const auto decoupled = AnalogyParams::symmetric({1, 1, 1}, 0.0, 0.0);
  const auto merged = AnalogyParams::symmetric({1, 1, 1}, 1.0, 1.0);
  const auto a = estimate_reichenbach_limit(AnalogicalRule(decoupled), sc, 100'000, 8, decoupled);
  const auto b = estimate_reichenbach_limit(AnalogicalRule(merged), sc, 100'000, 8, merged);
  // limiting_predictive must be computed independently of the stream
  const double share = 0.5;
  for (TypeIndex j = 0; j < 2; ++j) {
    const double bw = merged.cross_weight(j), r = j == 0 ? share : 1 - share;
    for (Outcome i = 0; i < 3; ++i) {
      const double want = (r * kFrequencies[j][i] + bw * (1 - r) * kFrequencies[1 - j][i]) / (r + bw * (1 - r));
      v.require(std::abs(b.convex_limit[j][i] - want) <= 1e-15, "convex limit disagrees with the hand formula");
    }
  }
  v.require(a.final_distance_to_frequency <= 1e-2, "beta=gamma=0 misses frequencies by " + num(a.final_distance_to_frequency));
  v.require(*b.final_distance_to_convex <= 1e-2, "beta=gamma=1 misses the convex limit by " + num(*b.final_distance_to_convex));
  v.require(b.final_distance_to_frequency > 0.1, "beta=gamma=1 is within " + num(b.final_distance_to_frequency) +
                                                      " of the frequencies");
  v.csv = "rule,step,type,outcome,predictive\n";
  for (const auto& [name, rep] : {std::pair{"decoupled", &a}, std::pair{"merged", &b}}) {
    for (const auto& cp : rep->checkpoints) {
      for (TypeIndex j = 0; j < cp.predictive.size(); ++j) {
        for (Outcome i = 0; i < cp.predictive[j].size(); ++i) {
          v.csv += std::string(name) + ',' + std::to_string(cp.step) + ',' + std::to_string(j) + ',' +
                   std::to_string(i) + ',' + num(cp.predictive[j][i]) + '\n';
        }
      }
    }
  }
  if (v.pass) {
    v.detail = "decoupled distance to frequency " + num(a.final_distance_to_frequency) +
               "; merged distance to convex limit " + num(*b.final_distance_to_convex) + ", to frequency " +
               num(b.final_distance_to_frequency);
  }
  return v;
}

Verdict sufficientness_dichotomy() {
  Verdict v;
  const auto carnap = check_sufficientness(CarnapRule(CarnapParams({0.5, 1.0, 2.0})), Sufficientness::classic, 3, 5, 1e-12);
  const SkyrmsRule skyrms(adjacent_pair_mixture(3, 5.0, 1.0));
  std::size_t fail_len = 0;
  SymmetryReport sk;
  for (std::size_t L = 1; L <= 4 && fail_len == 0; ++L) {
    sk = check_sufficientness(skyrms, Sufficientness::classic, 3, L, 1e-12);
    if (!sk.passed && !sk.witnesses.empty()) fail_len = L;
  }
  const AnalogicalRule analog(AnalogyParams({{1.0, 0.5}, {2.0, 1.0}, {0.7, 3.0}}, 0.5, 2.0));
  const auto mod = check_sufficientness(analog, Sufficientness::modified, 3, 5, 1e-12);
  v.require(carnap.passed, "carnap violates classic sufficientness by " + num(carnap.max_violation));
  v.require(fail_len != 0, "skyrms mixture passes classic sufficientness up to L = 4");
  v.require(fail_len == 0 || std::abs(replay_witness(skyrms, sk.witnesses.front()) - sk.witnesses.front().gap()) <= 1e-12,
            "skyrms witness does not replay");
  v.require(mod.passed, "analogical rule violates modified sufficientness by " + num(mod.max_violation));
  if (v.pass) {
    v.detail = "carnap PASS; skyrms FAIL at L=" + std::to_string(fail_len) + " (gap " + num(sk.max_violation) +
               "); analogical modified PASS at L=5";
  }
  return v;
}

Verdict maher_analogy_effect() {
  Verdict v;
  const MaherParams p = MaherParams::flat(0.5);
  const Outcome q1 = QPredicate::index(0, 0), q2 = QPredicate::index(1, 0), q4 = QPredicate::index(1, 1);
  const std::vector<Outcome> after_q2{q2}, after_q4{q4};
  const double near = maher_predict(after_q2, p)[q1];
  const double far = maher_predict(after_q4, p)[q1];
  // exact by the mixture formula: joint over marginal
  const double near_exact = (0.5 * (1.0 / 20) + 0.5 * (1.0 / 6) * (1.0 / 3)) / 0.25;
  const double far_exact = (0.5 * (1.0 / 20) + 0.5 * (1.0 / 6) * (1.0 / 6)) / 0.25;
  v.require(std::abs(near - near_exact) <= 1e-15 && std::abs(far - far_exact) <= 1e-15,
            "predictive disagrees with the mixture formula");
  v.require(near > far, "P(Q1|Q2) = " + num(near) + " is not above P(Q1|Q4) = " + num(far));
  if (v.pass) v.detail = "P(Q1|Q2) = " + num(near) + " > P(Q1|Q4) = " + num(far);
  return v;
}

Verdict transience_vs_permanence() {
  Verdict v;
  const StreamConfig sc = criterion8_stream();
  const MixtureModel wheel = adjacent_pair_mixture(3, 5.0, 1.0);
  const auto merged = AnalogyParams::symmetric({1, 1, 1}, 1.0, 1.0);
  IidStream stream(sc, 11);
  CountStatistics counts(3, 2);
  v.csv = "step,skyrms_gap,min_cross_term\n";
  double gap = 0.0, min_cross = 0.0;
  for (std::size_t step = 1; step <= 10'000; ++step) {
    const auto obs = stream.next();
    counts.add(obs.outcome, obs.type);
    if (step % 1000 != 0 && step != 10 && step != 100) continue;
    const SimplexVector post = mixture_posterior_from_counts(wheel, counts.outcome_totals());
    const std::size_t best = static_cast<std::size_t>(std::max_element(post.begin(), post.end()) - post.begin());
    const SimplexVector mix = skyrms_predict(wheel, counts);
    const SimplexVector top = carnap_predict(counts, wheel.components()[best]);
    gap = 0.0;
    for (Outcome i = 0; i < 3; ++i) gap = std::max(gap, std::abs(mix[i] - top[i]));
    // beta * n_i1 / (N_0 + beta N_1 + A_0), the part of the type-0 predictive fed by type-1 data
    min_cross = 1.0;
    const double denom = static_cast<double>(counts.type_total(0)) +
                         merged.beta() * static_cast<double>(counts.type_total(1)) + merged.alpha_total(0);
    for (Outcome i = 0; i < 3; ++i) min_cross = std::min(min_cross, merged.beta() * counts.n(i, 1) / denom);
    v.csv += std::to_string(step) + ',' + num(gap) + ',' + num(min_cross) + '\n';
  }
  v.require(gap < 1e-3, "skyrms analogy gap " + num(gap) + " at 10^4 steps");
  v.require(min_cross > 0.05, "analogical cross-type term " + num(min_cross) + " at 10^4 steps");
  if (v.pass) v.detail = "at 10^4 steps skyrms gap " + num(gap) + ", analogical cross term >= " + num(min_cross);
  return v;
}

std::string cli_artifacts(Task task) {
  ExperimentConfig c;
  c.task = task;
  c.outcomes = {"a", "b", "c"};
  c.types = {"s", "t"};
  c.rules = {{"decoupled", AnalogyParams::symmetric({1, 1, 1}, 0.0, 0.0)},
             {"merged", AnalogyParams::symmetric({1, 1, 1}, 1.0, 1.0)}};
  c.process.frequencies = kFrequencies;
  c.process.horizon = 20'000;
  c.process.seed = 12;
  std::string all;
  for (const auto& a : run_task(c).artifacts) all += a.name + '\n' + a.content;
  return all;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"laplace reduction", laplace_reduction},
      {"exchangeability suite", exchangeability_suite},
      {"polya/chain-rule equivalence", polya_chain_equivalence},
      {"de finetti monte carlo", de_finetti_mc},
      {"generalized partial exchangeability", generalized_partial_exchangeability},
      {"beta positivity", beta_positivity},
      {"urn model equivalence", urn_equivalence},
      {"reichenbach dichotomy", reichenbach_dichotomy},
      {"sufficientness dichotomy", sufficientness_dichotomy},
      {"maher analogy effect", maher_analogy_effect},
      {"transience vs permanence", transience_vs_permanence},
  };

  int failures = 0;
  std::vector<std::pair<std::size_t, std::string>> csvs;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    Verdict v;
    try {
      v = criteria[n].run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    if (!v.csv.empty()) csvs.emplace_back(n, std::move(v.csv));
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %2zu. %s: %s\n", v.pass ? "PASS" : "FAIL", n + 1, criteria[n].name, v.detail.c_str());
    std::fflush(stdout);
  }

  // Determinism: rerun every stochastic criterion and the stochastic CLI tasks with the same seeds.
  Verdict det;
  std::size_t compared = 0;
  try {
    for (const auto& [n, csv] : csvs) {
      det.require(criteria[n].run().csv == csv, std::string(criteria[n].name) + " CSV differs on rerun");
      ++compared;
    }
    for (Task t : {Task::simulate, Task::converge, Task::compare}) {
      det.require(cli_artifacts(t) == cli_artifacts(t), std::string(to_string(t)) + " artifacts differ on rerun");
      ++compared;
    }
  } catch (const std::exception& e) {
    det.require(false, std::string("threw: ") + e.what());
  }
  if (det.pass) det.detail = std::to_string(compared) + " CSV outputs byte-identical on rerun";
  failures += det.pass ? 0 : 1;
  std::printf("[%s] 12. determinism: %s\n", det.pass ? "PASS" : "FAIL", det.detail.c_str());

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
