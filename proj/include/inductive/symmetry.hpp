#ifndef INDUCTIVE_SYMMETRY_HPP
#define INDUCTIVE_SYMMETRY_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "analogy.hpp"
#include "core.hpp"
#include "stream.hpp"

namespace inductive {

// Exhaustive finite checks of probabilistic symmetry postulates against any PredictiveRule,
// plus a stream-based estimate of limiting predictive behaviour.

/// One replayable probability evaluation. With future_types empty the value is the chained
/// probability of `outcomes` at `types` continuing `context`. Otherwise it is the single-step
/// predictive of outcomes[0] at types[0] with the future types stipulated.
struct Probe {
  TypedHistory context;
  std::vector<Outcome> outcomes;
  std::vector<TypeIndex> types;
  std::vector<TypeIndex> future_types;
  double value = 0.0;
};

struct Witness {
  Probe first;
  Probe second;
  double gap() const { return std::abs(first.value - second.value); }
};

struct SymmetryReport {
  std::string postulate;
  double tolerance = 0.0;
  double max_violation = 0.0;
  std::size_t comparisons = 0;
  std::vector<Witness> witnesses;  // violations above tolerance, largest first
  bool passed = true;
};

struct EnumerationBudget {
  std::size_t max_outcomes = 4;
  std::size_t max_length = 7;
  std::size_t max_witnesses = 10;
};

inline constexpr double kExactTolerance = 1e-10;
inline constexpr double kLimitTolerance = 1e-2;

template <PredictiveRule R>
double evaluate_probe(const R& rule, const Probe& probe) {
  if (!probe.future_types.empty()) {
    detail::require(probe.outcomes.size() == 1 && probe.types.size() == 1,
                    "evaluate_probe: future types apply to a single step");
    return predict_given_future(rule, probe.context, probe.types[0], probe.future_types)[probe.outcomes[0]];
  }
  return continuation_probability(rule, probe.context, probe.outcomes, probe.types);
}

/// Recomputes both sides of a witness and returns the gap.
template <PredictiveRule R>
double replay_witness(const R& rule, const Witness& w) {
  return std::abs(evaluate_probe(rule, w.first) - evaluate_probe(rule, w.second));
}

namespace detail {

class ViolationLog {
 public:
  ViolationLog(std::string postulate, double tol, std::size_t max_witnesses)
      : max_witnesses_(max_witnesses) {
    report_.postulate = std::move(postulate);
    report_.tolerance = tol;
  }

  void compare(Probe a, Probe b) {
    ++report_.comparisons;
    const double gap = std::abs(a.value - b.value);
    report_.max_violation = std::max(report_.max_violation, gap);
    if (gap <= report_.tolerance) return;
    report_.witnesses.push_back({std::move(a), std::move(b)});
    std::stable_sort(report_.witnesses.begin(), report_.witnesses.end(),
                     [](const Witness& x, const Witness& y) { return x.gap() > y.gap(); });
    if (report_.witnesses.size() > max_witnesses_) report_.witnesses.pop_back();
  }

  SymmetryReport finish() && {
    report_.passed = report_.max_violation <= report_.tolerance;
    return std::move(report_);
  }

 private:
  SymmetryReport report_;
  std::size_t max_witnesses_;
};

/// Smallest and largest probe seen for one equivalence class.
struct Extremes {
  std::optional<Probe> lo, hi;
  void offer(const Probe& p) {
    if (!lo || p.value < lo->value) lo = p;
    if (!hi || p.value > hi->value) hi = p;
  }
};

/// Calls f on every vector in {0..base-1}^len, in lexicographic order.
inline void for_each_word(std::size_t base, std::size_t len, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> w(len, 0);
  while (true) {
    f(w);
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      if (++w[pos] < base) break;
      w[pos] = 0;
      if (pos == 0) return;
    }
    if (len == 0) return;
  }
}

/// Every typed history of length <= max_len over k outcomes and m types.
inline void for_each_history(std::size_t k, std::size_t m, std::size_t max_len,
                             const std::function<void(const TypedHistory&)>& f) {
  for (std::size_t len = 0; len <= max_len; ++len) {
    for_each_word(k * m, len, [&](const std::vector<std::size_t>& w) {
      std::vector<Outcome> xs(len);
      std::vector<TypeIndex> ys(len);
      for (std::size_t t = 0; t < len; ++t) {
        xs[t] = w[t] % k;
        ys[t] = w[t] / k;
      }
      f(TypedHistory(k, m, std::move(xs), std::move(ys)));
    });
  }
}

template <PredictiveRule R>
void check_budget(const R& rule, std::size_t k, std::size_t len, const EnumerationBudget& budget) {
  require(k == rule.outcome_count(), "symmetry check: k does not match the rule's outcome count");
  if (k > budget.max_outcomes || len > budget.max_length) {
    throw ResourceLimit("symmetry check: k=" + std::to_string(k) + ", L=" + std::to_string(len) +
                        " exceeds the enumeration budget (k<=" + std::to_string(budget.max_outcomes) +
                        ", L<=" + std::to_string(budget.max_length) + ")");
  }
}

template <PredictiveRule R>
std::size_t typed_space(const R& rule) {
  return rule.type_count() == 0 ? kAnalogyTypes : rule.type_count();
}

template <PredictiveRule R>
Probe joint_probe(const R& rule, const TypedHistory& context, std::vector<Outcome> xs, std::vector<TypeIndex> ys) {
  Probe p{context, std::move(xs), std::move(ys), {}, 0.0};
  p.value = evaluate_probe(rule, p);
  return p;
}

inline void flush_groups(std::map<std::vector<std::size_t>, Extremes>& groups, ViolationLog& log) {
  for (auto& [key, ex] : groups) {
    if (ex.lo && ex.hi) log.compare(*ex.hi, *ex.lo);
  }
  groups.clear();
}

}  // namespace detail

/// Joint probabilities of all sequences of length 1..L are compared within permutation classes.
template <PredictiveRule R>
SymmetryReport check_exchangeability(const R& rule, std::size_t k, std::size_t L, double tol = kExactTolerance,
                                     const EnumerationBudget& budget = {}) {
  detail::check_budget(rule, k, L, budget);
  const std::size_t m = std::max<std::size_t>(rule.type_count(), 1);
  const TypedHistory empty(k, m);
  detail::ViolationLog log("exchangeability", tol, budget.max_witnesses);
  std::map<std::vector<std::size_t>, detail::Extremes> groups;
  for (std::size_t len = 1; len <= L; ++len) {
    detail::for_each_word(k, len, [&](const std::vector<std::size_t>& xs) {
      auto key = tally(xs, k);
      groups[key].offer(detail::joint_probe(rule, empty, xs, std::vector<TypeIndex>(len, 0)));
    });
    detail::flush_groups(groups, log);
  }
  return std::move(log).finish();
}

/// As check_exchangeability but permutations may only exchange positions of equal type, for
/// every type sequence over two types.
template <PredictiveRule R>
SymmetryReport check_partial_exchangeability(const R& rule, std::size_t k, std::size_t L, double tol = kExactTolerance,
                                             const EnumerationBudget& budget = {}) {
  detail::check_budget(rule, k, L, budget);
  const std::size_t m = detail::typed_space(rule);
  const TypedHistory empty(k, m);
  detail::ViolationLog log("partial_exchangeability", tol, budget.max_witnesses);
  std::map<std::vector<std::size_t>, detail::Extremes> groups;
  for (std::size_t len = 1; len <= L; ++len) {
    detail::for_each_word(m, len, [&](const std::vector<std::size_t>& ys) {
      detail::for_each_word(k, len, [&](const std::vector<std::size_t>& xs) {
        std::vector<std::size_t> key(ys);
        std::vector<std::size_t> per_type(k * m, 0);
        for (std::size_t t = 0; t < len; ++t) ++per_type[xs[t] * m + ys[t]];
        key.insert(key.end(), per_type.begin(), per_type.end());
        groups[key].offer(detail::joint_probe(rule, empty, xs, ys));
      });
    });
    detail::flush_groups(groups, log);
  }
  return std::move(log).finish();
}

namespace detail {

// Three-step swaps p(i,k,j | s,t,s) vs p(j,k,i | s,t,s). `repeated_middle` selects the
// k in {i,j} cases instead of the required k not in {i,j} ones.
template <PredictiveRule R>
void three_step_swaps(const R& rule, std::size_t k, std::size_t L, bool repeated_middle, ViolationLog& log) {
  const std::size_t m = typed_space(rule);
  if (L < 3) return;
  for_each_history(k, m, L - 3, [&](const TypedHistory& h) {
    for (TypeIndex s = 0; s < m; ++s) {
      for (TypeIndex t = 0; t < m; ++t) {
        for (Outcome i = 0; i < k; ++i) {
          for (Outcome j = i + 1; j < k; ++j) {
            for (Outcome mid = 0; mid < k; ++mid) {
              const bool repeated = mid == i || mid == j;
              if (repeated != repeated_middle) continue;
              log.compare(joint_probe(rule, h, {i, mid, j}, {s, t, s}), joint_probe(rule, h, {j, mid, i}, {s, t, s}));
            }
          }
        }
      }
    }
  });
}

}  // namespace detail

/// Weakened partial exchangeability: three-step swaps around a differing middle outcome, plus
/// adjacent same-type swaps, after every history of length <= L-3 (resp. L-2).
template <PredictiveRule R>
SymmetryReport check_generalized_partial_exchangeability(const R& rule, std::size_t k, std::size_t L,
                                                         double tol = kExactTolerance,
                                                         const EnumerationBudget& budget = {}) {
  detail::check_budget(rule, k, L, budget);
  const std::size_t m = detail::typed_space(rule);
  detail::ViolationLog log("generalized_partial_exchangeability", tol, budget.max_witnesses);
  detail::three_step_swaps(rule, k, L, false, log);
  if (L >= 2) {
    detail::for_each_history(k, m, L - 2, [&](const TypedHistory& h) {
      for (TypeIndex s = 0; s < m; ++s) {
        for (Outcome i = 0; i < k; ++i) {
          for (Outcome j = i + 1; j < k; ++j) {
            log.compare(detail::joint_probe(rule, h, {i, j}, {s, s}), detail::joint_probe(rule, h, {j, i}, {s, s}));
          }
        }
      }
    });
  }
  return std::move(log).finish();
}

/// The three-step swaps whose middle outcome repeats a swapped one. Not required by the
/// generalized condition; reported for diagnosis.
template <PredictiveRule R>
SymmetryReport probe_repeated_middle_swaps(const R& rule, std::size_t k, std::size_t L, double tol = kExactTolerance,
                                           const EnumerationBudget& budget = {}) {
  detail::check_budget(rule, k, L, budget);
  detail::ViolationLog log("repeated_middle_swaps", tol, budget.max_witnesses);
  detail::three_step_swaps(rule, k, L, true, log);
  return std::move(log).finish();
}

enum class Sufficientness { classic, modified };

/// Groups histories of length <= L by the statistic the postulate allows the prediction to
/// read, and compares predictions within each group. classic: (i, n_i, n) over type-free
/// histories. modified: (i, next type, n_i0, n_i1, N_0, N_1) over two-type histories.
template <PredictiveRule R>
SymmetryReport check_sufficientness(const R& rule, Sufficientness variant, std::size_t k, std::size_t L,
                                    double tol = kExactTolerance, const EnumerationBudget& budget = {}) {
  detail::check_budget(rule, k, L, budget);
  const bool classic = variant == Sufficientness::classic;
  const std::size_t m = classic ? std::max<std::size_t>(rule.type_count(), 1) : detail::typed_space(rule);
  detail::require(classic || m == kAnalogyTypes, "modified sufficientness needs a two-type rule");
  detail::ViolationLog log(classic ? "sufficientness_classic" : "sufficientness_modified", tol, budget.max_witnesses);
  std::map<std::vector<std::size_t>, detail::Extremes> groups;

  auto visit = [&](const TypedHistory& h) {
    const CountStatistics c = counts_from_history(h);
    const std::size_t next_types = classic ? 1 : m;
    for (TypeIndex s = 0; s < next_types; ++s) {
      const SimplexVector pred = rule.predict(h, s);
      for (Outcome i = 0; i < k; ++i) {
        std::vector<std::size_t> key;
        if (classic) {
          key = {i, c.outcome_total(i), c.total()};
        } else {
          key = {i, s, c.n(i, 0), c.n(i, 1), c.type_total(0), c.type_total(1)};
        }
        groups[key].offer(Probe{h, {i}, {s}, {}, pred[i]});
      }
    }
  };
  if (classic) {
    for (std::size_t len = 0; len <= L; ++len) {
      detail::for_each_word(k, len, [&](const std::vector<std::size_t>& xs) {
        visit(TypedHistory(k, m, xs, std::vector<TypeIndex>(len, 0)));
      });
    }
  } else {
    detail::for_each_history(k, m, L, visit);
  }
  detail::flush_groups(groups, log);
  return std::move(log).finish();
}

/// The next-step predictive must not move when one or two further types are stipulated.
template <PredictiveRule R>
SymmetryReport check_future_type_independence(const R& rule, std::size_t k, std::size_t L,
                                              double tol = kExactTolerance, const EnumerationBudget& budget = {}) {
  detail::check_budget(rule, k, L, budget);
  const std::size_t m = detail::typed_space(rule);
  detail::ViolationLog log("future_type_independence", tol, budget.max_witnesses);
  detail::for_each_history(k, m, L, [&](const TypedHistory& h) {
    for (TypeIndex s = 0; s < m; ++s) {
      const SimplexVector base = rule.predict(h, s);
      for (std::size_t extra = 1; extra <= 2; ++extra) {
        detail::for_each_word(m, extra, [&](const std::vector<std::size_t>& future) {
          const SimplexVector stipulated = predict_given_future(rule, h, s, future);
          for (Outcome i = 0; i < k; ++i) {
            log.compare(Probe{h, {i}, {s}, future, stipulated[i]}, Probe{h, {i}, {s}, {}, base[i]});
          }
        });
      }
    }
  });
  return std::move(log).finish();
}

// ---------------------------------------------------------------------------
// Limits along simulated streams

enum class LimitVerdict { reichenbach, convex_combination, both, neither };

inline const char* to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::reichenbach: return "reichenbach";
    case LimitVerdict::convex_combination: return "convex_combination";
    case LimitVerdict::both: return "both";
    case LimitVerdict::neither: return "neither";
  }
  return "?";
}

struct LimitCheckpoint {
  std::size_t step = 0;
  std::vector<SimplexVector> predictive;                 // per type
  std::vector<double> distance_to_frequency;             // per type, sup over outcomes
  std::vector<double> distance_to_convex;                // per type; empty without analogy params
};

struct LimitReport {
  double tolerance = kLimitTolerance;
  std::vector<LimitCheckpoint> checkpoints;
  std::vector<SimplexVector> convex_limit;  // per type; empty without analogy params
  double final_distance_to_frequency = 0.0;
  std::optional<double> final_distance_to_convex;
  LimitVerdict verdict = LimitVerdict::neither;
};

inline std::vector<std::size_t> default_checkpoints(std::size_t horizon) {
  std::vector<std::size_t> out;
  for (std::size_t s = 10; s < horizon; s *= 10) out.push_back(s);
  out.push_back(horizon);
  return out;
}

/// Feeds an i.i.d. stream to a count-based rule and measures, at checkpoints, the distance of
/// each type's predictive from the generating per-type frequencies and, when analogy parameters
/// are given, from the convex-combination limit.
template <CountBasedRule R>
LimitReport estimate_reichenbach_limit(const R& rule, const StreamConfig& config, std::size_t horizon,
                                       std::uint64_t seed, const std::optional<AnalogyParams>& analogy = std::nullopt,
                                       double tol = kLimitTolerance) {
  config.validate();
  detail::require(horizon >= 1, "estimate_reichenbach_limit: horizon must be positive");
  detail::require(config.outcome_count() == rule.outcome_count(), "estimate_reichenbach_limit: outcome count mismatch");
  detail::require(rule.type_count() == 0 || rule.type_count() == config.type_count(),
                  "estimate_reichenbach_limit: type count mismatch");
  const std::size_t m = config.type_count();

  LimitReport rep;
  rep.tolerance = tol;
  if (analogy) {
    detail::require(m == kAnalogyTypes, "estimate_reichenbach_limit: analogy limit needs two types");
    const std::array<SimplexVector, 2> f{config.frequencies[0], config.frequencies[1]};
    const double share = config.types.probabilities()[0];
    for (TypeIndex j = 0; j < m; ++j) rep.convex_limit.push_back(limiting_predictive(f, *analogy, share, j));
  }

  IidStream stream(config, seed);
  CountStatistics counts(config.outcome_count(), m);
  const auto marks = default_checkpoints(horizon);
  std::size_t next_mark = 0;
  for (std::size_t step = 1; step <= horizon; ++step) {
    const auto obs = stream.next();
    counts.add(obs.outcome, obs.type);
    if (step != marks[next_mark]) continue;
    ++next_mark;
    LimitCheckpoint cp;
    cp.step = step;
    for (TypeIndex j = 0; j < m; ++j) {
      SimplexVector pred = rule.predict(counts, j);
      double d_freq = 0.0, d_conv = 0.0;
      for (Outcome i = 0; i < pred.size(); ++i) {
        d_freq = std::max(d_freq, std::abs(pred[i] - config.frequencies[j][i]));
        if (analogy) d_conv = std::max(d_conv, std::abs(pred[i] - rep.convex_limit[j][i]));
      }
      cp.predictive.push_back(std::move(pred));
      cp.distance_to_frequency.push_back(d_freq);
      if (analogy) cp.distance_to_convex.push_back(d_conv);
    }
    rep.checkpoints.push_back(std::move(cp));
  }

  const auto& last = rep.checkpoints.back();
  rep.final_distance_to_frequency = *std::max_element(last.distance_to_frequency.begin(), last.distance_to_frequency.end());
  const bool near_freq = rep.final_distance_to_frequency <= tol;
  bool near_convex = false;
  if (analogy) {
    rep.final_distance_to_convex = *std::max_element(last.distance_to_convex.begin(), last.distance_to_convex.end());
    near_convex = *rep.final_distance_to_convex <= tol;
  }
  rep.verdict = near_freq && near_convex ? LimitVerdict::both
                : near_freq              ? LimitVerdict::reichenbach
                : near_convex            ? LimitVerdict::convex_combination
                                         : LimitVerdict::neither;
  return rep;
}

// ---------------------------------------------------------------------------
// Structured text

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_indices(std::ostream& os, std::span<const std::size_t> xs) {
  os << '[';
  for (std::size_t t = 0; t < xs.size(); ++t) os << (t ? "," : "") << xs[t];
  os << ']';
}

inline void write_probe(std::ostream& os, const Probe& p) {
  os << "context_outcomes=";
  write_indices(os, p.context.outcomes());
  os << " context_types=";
  write_indices(os, p.context.types());
  os << " outcomes=";
  write_indices(os, p.outcomes);
  os << " types=";
  write_indices(os, p.types);
  if (!p.future_types.empty()) {
    os << " future_types=";
    write_indices(os, p.future_types);
  }
  os << " p=" << format_double(p.value);
}

}  // namespace detail

/// One record per report: name, tolerance, max violation, status and the witness list.
inline std::string to_text(const SymmetryReport& r) {
  std::ostringstream os;
  os << "postulate: " << r.postulate << '\n'
     << "tolerance: " << detail::format_double(r.tolerance) << '\n'
     << "max_violation: " << detail::format_double(r.max_violation) << '\n'
     << "comparisons: " << r.comparisons << '\n'
     << "status: " << (r.passed ? "PASS" : "FAIL") << '\n'
     << "witnesses: " << r.witnesses.size() << '\n';
  for (std::size_t n = 0; n < r.witnesses.size(); ++n) {
    const auto& w = r.witnesses[n];
    os << "  - gap: " << detail::format_double(w.gap()) << '\n' << "    a: ";
    detail::write_probe(os, w.first);
    os << '\n' << "    b: ";
    detail::write_probe(os, w.second);
    os << '\n';
  }
  return os.str();
}

}  // namespace inductive

#endif  // INDUCTIVE_SYMMETRY_HPP
