#ifndef INDUCTIVE_MIXTURES_HPP
#define INDUCTIVE_MIXTURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "carnap.hpp"
#include "core.hpp"

namespace inductive {

namespace detail {

inline double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (std::isinf(hi)) return hi;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite mixtures of basic systems (Skyrms)

class MixtureModel {
 public:
  MixtureModel(std::vector<CarnapParams> components, SimplexVector weights)
      : components_(std::move(components)), weights_(std::move(weights)) {
    detail::require(!components_.empty(), "MixtureModel: need at least one component");
    detail::require(weights_.size() == components_.size(), "MixtureModel: one weight per component");
    for (const auto& c : components_) {
      detail::require(c.outcome_count() == components_.front().outcome_count(),
                      "MixtureModel: components must share the outcome space");
    }
  }

  explicit MixtureModel(std::vector<CarnapParams> components)
      : MixtureModel(components, SimplexVector::uniform(components.size())) {}

  std::size_t outcome_count() const { return components_.front().outcome_count(); }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<CarnapParams>& components() const noexcept { return components_; }
  const SimplexVector& weights() const noexcept { return weights_; }

  friend bool operator==(const MixtureModel&, const MixtureModel&) = default;

 private:
  std::vector<CarnapParams> components_;
  SimplexVector weights_;
};

/// Posterior over components given the pooled outcome totals.
inline SimplexVector mixture_posterior_from_counts(const MixtureModel& m, std::span<const std::size_t> outcome_counts) {
  std::vector<double> logpost(m.size());
  for (std::size_t c = 0; c < m.size(); ++c) {
    const double prior = m.weights()[c];
    logpost[c] = prior > 0.0 ? std::log(prior) + log_polya_count_probability(outcome_counts, m.components()[c])
                             : -std::numeric_limits<double>::infinity();
  }
  const double norm = detail::log_sum_exp(logpost);
  // Positive alphas make every finite sequence possible under every component.
  if (std::isinf(norm)) throw NumericalDegeneracy("mixture_posterior: every component has zero likelihood");
  std::vector<double> post(m.size());
  for (std::size_t c = 0; c < m.size(); ++c) post[c] = std::exp(logpost[c] - norm);
  return SimplexVector::normalized(std::move(post));
}

inline SimplexVector mixture_posterior(const MixtureModel& m, std::span<const Outcome> outcomes) {
  return mixture_posterior_from_counts(m, tally(outcomes, m.outcome_count()));
}

inline SimplexVector skyrms_predict(const MixtureModel& m, const CountStatistics& counts) {
  const SimplexVector post = mixture_posterior_from_counts(m, counts.outcome_totals());
  std::vector<double> out(m.outcome_count(), 0.0);
  for (std::size_t c = 0; c < m.size(); ++c) {
    const SimplexVector pc = carnap_predict(counts, m.components()[c]);
    for (Outcome i = 0; i < out.size(); ++i) out[i] += post[c] * pc[i];
  }
  return SimplexVector::normalized(std::move(out));
}

inline SimplexVector skyrms_predict(const MixtureModel& m, std::span<const Outcome> outcomes) {
  return skyrms_predict(m, counts_from_history(TypedHistory::untyped(
                               m.outcome_count(), std::vector<Outcome>(outcomes.begin(), outcomes.end()))));
}

class SkyrmsRule {
 public:
  explicit SkyrmsRule(MixtureModel model) : model_(std::move(model)) {}

  SimplexVector predict(const CountStatistics& c, TypeIndex /*next_type*/) const { return skyrms_predict(model_, c); }
  SimplexVector predict(const TypedHistory& h, TypeIndex next_type) const {
    return predict(counts_from_history(h), next_type);
  }
  std::size_t outcome_count() const { return model_.outcome_count(); }
  std::size_t type_count() const noexcept { return 0; }
  const MixtureModel& model() const noexcept { return model_; }

 private:
  MixtureModel model_;
};

/// Wheel-of-fortune mixture: one component per adjacent pair of outcomes, each putting `strong`
/// prior weight on its pair and `weak` elsewhere. With `closed` the last outcome neighbours the first.
inline MixtureModel adjacent_pair_mixture(std::size_t k, double strong, double weak, bool closed = false) {
  detail::require(k >= 3, "adjacent_pair_mixture: need at least three outcomes");
  std::vector<CarnapParams> comps;
  const std::size_t pairs = closed ? k : k - 1;
  for (std::size_t c = 0; c < pairs; ++c) {
    std::vector<double> a(k, weak);
    a[c] = strong;
    a[(c + 1) % k] = strong;
    comps.emplace_back(std::move(a));
  }
  return MixtureModel(std::move(comps));
}

// ---------------------------------------------------------------------------
// Two binary predicate families (Maher)

/// Q-predicates combine one value from family V and one from family W:
/// Q1 = (0,0), Q2 = (1,0), Q3 = (0,1), Q4 = (1,1). Indices here are 0-based.
struct QPredicate {
  static constexpr std::size_t kCount = 4;

  static constexpr Outcome index(unsigned v, unsigned w) { return static_cast<Outcome>(v + 2 * w); }
  static constexpr unsigned v_of(Outcome q) { return static_cast<unsigned>(q & 1U); }
  static constexpr unsigned w_of(Outcome q) { return static_cast<unsigned>((q >> 1) & 1U); }
};

static_assert(QPredicate::index(0, 0) == 0 && QPredicate::index(1, 0) == 1);
static_assert(QPredicate::index(0, 1) == 2 && QPredicate::index(1, 1) == 3);

/// Mixture with weight `w` on a 4-outcome basic system over Q-predicates and 1-w on the
/// product of independent basic systems for the two families.
class MaherParams {
 public:
  MaherParams(double w, CarnapParams alpha4, CarnapParams alpha_v, CarnapParams alpha_w)
      : w_(w), alpha4_(std::move(alpha4)), alpha_v_(std::move(alpha_v)), alpha_w_(std::move(alpha_w)) {
    detail::require(std::isfinite(w_) && w_ >= 0.0 && w_ <= 1.0, "MaherParams: w must lie in [0,1]");
    detail::require(alpha4_.outcome_count() == 4, "MaherParams: alpha4 must cover four Q-predicates");
    detail::require(alpha_v_.outcome_count() == 2 && alpha_w_.outcome_count() == 2,
                    "MaherParams: family parameters must be binary");
  }

  /// All alphas equal to 1.
  static MaherParams flat(double w) {
    return MaherParams(w, CarnapParams({1, 1, 1, 1}), CarnapParams({1, 1}), CarnapParams({1, 1}));
  }

  double w() const noexcept { return w_; }
  const CarnapParams& alpha4() const noexcept { return alpha4_; }
  const CarnapParams& alpha_v() const noexcept { return alpha_v_; }
  const CarnapParams& alpha_w() const noexcept { return alpha_w_; }

  friend bool operator==(const MaherParams&, const MaherParams&) = default;

 private:
  double w_;
  CarnapParams alpha4_;
  CarnapParams alpha_v_;
  CarnapParams alpha_w_;
};

namespace detail {

inline std::pair<std::array<std::size_t, 2>, std::array<std::size_t, 2>> project_counts(
    std::span<const std::size_t> q_counts) {
  std::array<std::size_t, 2> v{0, 0}, w{0, 0};
  for (Outcome q = 0; q < QPredicate::kCount; ++q) {
    v[QPredicate::v_of(q)] += q_counts[q];
    w[QPredicate::w_of(q)] += q_counts[q];
  }
  return {v, w};
}

}  // namespace detail

/// log of the sequence probability; depends only on the Q-counts.
inline double log_maher_count_probability(std::span<const std::size_t> q_counts, const MaherParams& p) {
  detail::require(q_counts.size() == QPredicate::kCount, "maher: need four Q-counts");
  const auto [v, w] = detail::project_counts(q_counts);
  const double inf = std::numeric_limits<double>::infinity();
  const double dependent = p.w() > 0.0 ? std::log(p.w()) + log_polya_count_probability(q_counts, p.alpha4()) : -inf;
  const double independent = p.w() < 1.0 ? std::log1p(-p.w()) + log_polya_count_probability(v, p.alpha_v()) +
                                               log_polya_count_probability(w, p.alpha_w())
                                         : -inf;
  const std::array<double, 2> terms{dependent, independent};
  return detail::log_sum_exp(terms);
}

inline double maher_sequence_probability(std::span<const Outcome> qs, const MaherParams& p) {
  const auto counts = tally(qs, QPredicate::kCount);
  const auto [v, w] = detail::project_counts(counts);
  return p.w() * polya_count_probability(counts, p.alpha4()) +
         (1.0 - p.w()) * polya_count_probability(v, p.alpha_v()) * polya_count_probability(w, p.alpha_w());
}

inline SimplexVector maher_predict_from_counts(std::span<const std::size_t> q_counts, const MaherParams& p) {
  const double base = log_maher_count_probability(q_counts, p);
  std::vector<std::size_t> next(q_counts.begin(), q_counts.end());
  std::vector<double> out(QPredicate::kCount);
  for (Outcome q = 0; q < QPredicate::kCount; ++q) {
    ++next[q];
    out[q] = std::exp(log_maher_count_probability(next, p) - base);
    --next[q];
  }
  return SimplexVector::normalized(std::move(out));
}

/// Ratio of sequence probabilities: P(qs + q) / P(qs).
inline SimplexVector maher_predict(std::span<const Outcome> qs, const MaherParams& p) {
  return maher_predict_from_counts(tally(qs, QPredicate::kCount), p);
}

class MaherRule {
 public:
  explicit MaherRule(MaherParams params) : params_(std::move(params)) {}

  SimplexVector predict(const CountStatistics& c, TypeIndex /*next_type*/) const {
    detail::require(c.outcome_count() == QPredicate::kCount, "MaherRule: four Q-predicates expected");
    return maher_predict_from_counts(c.outcome_totals(), params_);
  }
  SimplexVector predict(const TypedHistory& h, TypeIndex next_type) const {
    return predict(counts_from_history(h), next_type);
  }
  std::size_t outcome_count() const noexcept { return QPredicate::kCount; }
  std::size_t type_count() const noexcept { return 0; }
  const MaherParams& params() const noexcept { return params_; }

 private:
  MaherParams params_;
};

/// Independent joint of the two families with P(V=1) = a, P(W=1) = b.
inline SimplexVector wright_manifold_point(double a, double b) {
  detail::require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, "wright_manifold_point: a, b must lie in [0,1]");
  std::vector<double> x(QPredicate::kCount);
  x[QPredicate::index(0, 0)] = (1 - a) * (1 - b);
  x[QPredicate::index(1, 0)] = a * (1 - b);
  x[QPredicate::index(0, 1)] = (1 - a) * b;
  x[QPredicate::index(1, 1)] = a * b;
  return SimplexVector(std::move(x));
}

/// x1 = (x1 + x2)(x1 + x3), i.e. the two families are independent under x.
inline bool check_on_manifold(const SimplexVector& x, double tol = 1e-12) {
  detail::require(x.size() == QPredicate::kCount, "check_on_manifold: point must lie in the 4-simplex");
  return std::abs(x[0] - (x[0] + x[1]) * (x[0] + x[2])) <= tol;
}

}  // namespace inductive

#endif  // INDUCTIVE_MIXTURES_HPP
