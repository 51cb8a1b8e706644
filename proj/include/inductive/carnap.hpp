#ifndef INDUCTIVE_CARNAP_HPP
#define INDUCTIVE_CARNAP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "core.hpp"
#include "random.hpp"

namespace inductive {

/// Prior weights alpha_i of the generalized rule of succession. All strictly positive:
/// only the infinite-sequence regime is supported.
class CarnapParams {
 public:
  explicit CarnapParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    detail::require(alpha_.size() >= 2, "CarnapParams: need at least two outcomes");
    for (double a : alpha_) {
      detail::require(std::isfinite(a) && a > 0.0, "CarnapParams: every alpha must be positive and finite");
    }
  }

  std::size_t outcome_count() const noexcept { return alpha_.size(); }
  std::span<const double> alpha() const noexcept { return alpha_; }
  double alpha(Outcome i) const { return alpha_.at(i); }
  double total() const noexcept {
    double s = 0.0;
    for (double a : alpha_) s += a;
    return s;
  }

  friend bool operator==(const CarnapParams&, const CarnapParams&) = default;

 private:
  std::vector<double> alpha_;
};

/// lambda > 0 scales the prior guess gamma on the simplex.
struct LambdaGamma {
  double lambda;
  SimplexVector gamma;
};

inline CarnapParams lambda_gamma_to_alpha(const LambdaGamma& lg) {
  detail::require(std::isfinite(lg.lambda) && lg.lambda > 0.0, "LambdaGamma: lambda must be positive");
  std::vector<double> alpha(lg.gamma.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = lg.lambda * lg.gamma[i];
  return CarnapParams(std::move(alpha));
}

inline LambdaGamma alpha_to_lambda_gamma(const CarnapParams& p) {
  const double lambda = p.total();
  std::vector<double> gamma(p.alpha().begin(), p.alpha().end());
  return {lambda, SimplexVector::normalized(std::move(gamma))};
}

/// (n_i + alpha_i) / (n + sum alpha), read from the pooled counts; the type dimension is ignored.
inline SimplexVector carnap_predict(const CountStatistics& counts, const CarnapParams& p) {
  detail::require(counts.outcome_count() == p.outcome_count(), "carnap_predict: outcome count mismatch");
  const double denom = static_cast<double>(counts.total()) + p.total();
  std::vector<double> out(p.outcome_count());
  for (Outcome i = 0; i < out.size(); ++i) {
    out[i] = (static_cast<double>(counts.outcome_total(i)) + p.alpha(i)) / denom;
  }
  return SimplexVector(std::move(out));
}

/// The basic system as a type-blind PredictiveRule.
class CarnapRule {
 public:
  explicit CarnapRule(CarnapParams params) : params_(std::move(params)) {}

  SimplexVector predict(const CountStatistics& c, TypeIndex /*next_type*/) const { return carnap_predict(c, params_); }
  SimplexVector predict(const TypedHistory& h, TypeIndex next_type) const {
    return predict(counts_from_history(h), next_type);
  }
  std::size_t outcome_count() const noexcept { return params_.outcome_count(); }
  std::size_t type_count() const noexcept { return 0; }
  const CarnapParams& params() const noexcept { return params_; }

 private:
  CarnapParams params_;
};

/// x (x+1) ... (x+m-1)
inline double rising_factorial(double x, std::size_t m) {
  double r = 1.0;
  for (std::size_t j = 0; j < m; ++j) r *= x + static_cast<double>(j);
  return r;
}

inline double log_rising_factorial(double x, std::size_t m) {
  if (m == 0) return 0.0;
  return std::lgamma(x + static_cast<double>(m)) - std::lgamma(x);
}

/// prod_i alpha_i^(n_i) / (sum alpha)^(n) for the given outcome totals.
inline double polya_count_probability(std::span<const std::size_t> outcome_counts, const CarnapParams& p) {
  detail::require(outcome_counts.size() == p.outcome_count(), "polya: outcome count mismatch");
  double num = 1.0;
  std::size_t n = 0;
  for (Outcome i = 0; i < outcome_counts.size(); ++i) {
    num *= rising_factorial(p.alpha(i), outcome_counts[i]);
    n += outcome_counts[i];
  }
  return num / rising_factorial(p.total(), n);
}

inline double log_polya_count_probability(std::span<const std::size_t> outcome_counts, const CarnapParams& p) {
  detail::require(outcome_counts.size() == p.outcome_count(), "polya: outcome count mismatch");
  double lp = 0.0;
  std::size_t n = 0;
  for (Outcome i = 0; i < outcome_counts.size(); ++i) {
    lp += log_rising_factorial(p.alpha(i), outcome_counts[i]);
    n += outcome_counts[i];
  }
  return lp - log_rising_factorial(p.total(), n);
}

inline std::vector<std::size_t> tally(std::span<const Outcome> outcomes, std::size_t k) {
  std::vector<std::size_t> c(k, 0);
  for (Outcome o : outcomes) {
    detail::require(o < k, "outcome index out of range");
    ++c[o];
  }
  return c;
}

/// Probability of an ordered outcome sequence under the Polya urn / Dirichlet mixture, in closed form.
inline double polya_sequence_probability(std::span<const Outcome> outcomes, const CarnapParams& p) {
  return polya_count_probability(tally(outcomes, p.outcome_count()), p);
}

// ---------------------------------------------------------------------------
// Monte Carlo check of the Dirichlet mixture representation

struct McEstimate {
  SimplexVector estimate;
  std::vector<double> standard_error;
  std::size_t samples = 0;
  double effective_sample_size = 0.0;
};

namespace detail {

// Sums over prior draws, stored relative to exp(log_scale) so that weights never underflow.
struct McPartial {
  double log_scale = -std::numeric_limits<double>::infinity();
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  std::vector<double> sum_w_theta;
  std::vector<double> sum_w2_theta;
  std::vector<double> sum_w2_theta2;

  explicit McPartial(std::size_t k) : sum_w_theta(k, 0.0), sum_w2_theta(k, 0.0), sum_w2_theta2(k, 0.0) {}

  void rescale(double new_scale) {
    if (new_scale == log_scale) return;
    const double f = std::isinf(log_scale) ? 0.0 : std::exp(log_scale - new_scale);
    const double f2 = f * f;
    sum_w *= f;
    sum_w2 *= f2;
    for (std::size_t i = 0; i < sum_w_theta.size(); ++i) {
      sum_w_theta[i] *= f;
      sum_w2_theta[i] *= f2;
      sum_w2_theta2[i] *= f2;
    }
    log_scale = new_scale;
  }

  void add(double log_w, std::span<const double> theta) {
    if (std::isinf(log_w)) return;
    if (log_w > log_scale) rescale(log_w);
    const double w = std::exp(log_w - log_scale);
    sum_w += w;
    sum_w2 += w * w;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      sum_w_theta[i] += w * theta[i];
      sum_w2_theta[i] += w * w * theta[i];
      sum_w2_theta2[i] += w * w * theta[i] * theta[i];
    }
  }

  void merge(McPartial other) {
    if (std::isinf(other.log_scale)) return;
    const double s = std::max(log_scale, other.log_scale);
    rescale(s);
    other.rescale(s);
    sum_w += other.sum_w;
    sum_w2 += other.sum_w2;
    for (std::size_t i = 0; i < sum_w_theta.size(); ++i) {
      sum_w_theta[i] += other.sum_w_theta[i];
      sum_w2_theta[i] += other.sum_w2_theta[i];
      sum_w2_theta2[i] += other.sum_w2_theta2[i];
    }
  }
};

inline McPartial mc_chunk(const CarnapParams& p, std::span<const std::size_t> counts, std::size_t samples,
                          std::uint64_t seed, std::uint64_t stream) {
  const std::size_t k = p.outcome_count();
  Rng rng(seed, stream);
  std::vector<std::gamma_distribution<double>> gammas;
  gammas.reserve(k);
  for (Outcome i = 0; i < k; ++i) gammas.emplace_back(p.alpha(i), 1.0);

  McPartial acc(k);
  std::vector<double> theta(k);
  for (std::size_t s = 0; s < samples; ++s) {
    double total = 0.0;
    for (Outcome i = 0; i < k; ++i) {
      theta[i] = gammas[i](rng.engine());
      total += theta[i];
    }
    if (!(total > 0.0)) continue;
    double log_w = 0.0;
    for (Outcome i = 0; i < k; ++i) {
      theta[i] /= total;
      if (counts[i] > 0) log_w += static_cast<double>(counts[i]) * std::log(theta[i]);
    }
    acc.add(log_w, theta);
  }
  return acc;
}

}  // namespace detail

/// Number of independent generator streams the sample budget is split into. Fixed so the
/// estimate does not depend on how many threads run them.
inline constexpr std::size_t kMcStreams = 16;

/// Posterior-mean predictive by importance weighting Dirichlet(alpha) prior draws with the
/// i.i.d. likelihood of the pooled counts. Weights are handled in log space.
inline McEstimate dirichlet_mc_predictive(const CarnapParams& p, const CountStatistics& counts, std::size_t samples,
                                          std::uint64_t seed, unsigned threads = 0) {
  detail::require(samples >= 1, "dirichlet_mc_predictive: need at least one sample");
  detail::require(counts.outcome_count() == p.outcome_count(), "dirichlet_mc_predictive: outcome count mismatch");
  const std::size_t k = p.outcome_count();
  std::vector<std::size_t> n(counts.outcome_totals().begin(), counts.outcome_totals().end());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<detail::McPartial> partials(kMcStreams, detail::McPartial(k));
  auto run_stream = [&](std::size_t c) {
    const std::size_t share = samples / kMcStreams + (c < samples % kMcStreams ? 1 : 0);
    partials[c] = detail::mc_chunk(p, n, share, seed, c);
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min<std::size_t>(threads, kMcStreams);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < kMcStreams; c += workers) run_stream(c);
      });
    }
  }

  detail::McPartial total(k);
  for (auto& part : partials) total.merge(std::move(part));  // fixed order
  if (!(total.sum_w > 0.0)) {
    throw NumericalDegeneracy("dirichlet_mc_predictive: every likelihood weight is zero");
  }

  std::vector<double> est(k), se(k);
  for (Outcome i = 0; i < k; ++i) {
    est[i] = total.sum_w_theta[i] / total.sum_w;
    // delta-method variance of the self-normalized ratio estimator
    double v = total.sum_w2_theta2[i] - 2.0 * est[i] * total.sum_w2_theta[i] + est[i] * est[i] * total.sum_w2;
    se[i] = std::sqrt(std::max(v, 0.0)) / total.sum_w;
  }
  McEstimate out{SimplexVector::normalized(std::move(est)), std::move(se), samples,
                 total.sum_w * total.sum_w / total.sum_w2};
  return out;
}

}  // namespace inductive

#endif  // INDUCTIVE_CARNAP_HPP
