#ifndef INDUCTIVE_CORE_HPP
#define INDUCTIVE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace inductive {

using Outcome = std::size_t;
using TypeIndex = std::size_t;

// Error taxonomy. The CLI maps each one onto a distinct exit code.

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A conditional was requested on a history the rule assigns probability 0.
struct RegularityViolation : std::domain_error {
  using std::domain_error::domain_error;
};

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalDegeneracy : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

inline std::vector<std::string> default_labels(std::size_t n, const std::string& prefix) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline void require_distinct(const std::vector<std::string>& labels, const std::string& what) {
  std::unordered_set<std::string> seen(labels.begin(), labels.end());
  require(seen.size() == labels.size(), what + ": labels must be distinct");
}

}  // namespace detail

/// Finite set of outcome labels, k >= 2.
class OutcomeSpace {
 public:
  explicit OutcomeSpace(std::size_t count)
      : OutcomeSpace(detail::default_labels(count, "o")) {}

  explicit OutcomeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    detail::require(labels_.size() >= 2, "OutcomeSpace: need at least two outcomes");
    detail::require_distinct(labels_, "OutcomeSpace");
  }

  std::size_t count() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Outcome i) const { return labels_.at(i); }

  Outcome index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InvalidInput("unknown outcome label '" + label + "'");
    return static_cast<Outcome>(it - labels_.begin());
  }

  friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Finite set of type labels, m >= 1. m == 1 is the type-free setting.
class TypeSpace {
 public:
  explicit TypeSpace(std::size_t count) : TypeSpace(detail::default_labels(count, "t")) {}

  explicit TypeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    detail::require(!labels_.empty(), "TypeSpace: need at least one type");
    detail::require_distinct(labels_, "TypeSpace");
  }

  std::size_t count() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(TypeIndex j) const { return labels_.at(j); }

  TypeIndex index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InvalidInput("unknown type label '" + label + "'");
    return static_cast<TypeIndex>(it - labels_.begin());
  }

  friend bool operator==(const TypeSpace&, const TypeSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

/// Probability vector over outcomes. Entries lie in [0,1] and sum to 1 within 1e-12.
class SimplexVector {
 public:
  static constexpr double kTolerance = 1e-12;

  SimplexVector() = default;

  explicit SimplexVector(std::vector<double> values) : values_(std::move(values)) {
    detail::require(!values_.empty(), "SimplexVector: empty");
    double sum = 0.0;
    for (double v : values_) {
      detail::require(std::isfinite(v) && v >= -kTolerance && v <= 1.0 + kTolerance,
                      "SimplexVector: entry outside [0,1]");
      sum += v;
    }
    detail::require(std::abs(sum - 1.0) <= kTolerance, "SimplexVector: entries do not sum to 1");
  }

  /// Divides by the sum. The input must be nonnegative with a positive sum.
  static SimplexVector normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
      detail::require(std::isfinite(w) && w >= 0.0, "SimplexVector: negative or non-finite weight");
      sum += w;
    }
    if (!(sum > 0.0)) throw NumericalDegeneracy("SimplexVector: weights sum to zero");
    for (double& w : weights) w /= sum;
    return SimplexVector(std::move(weights));
  }

  static SimplexVector uniform(std::size_t n) {
    return SimplexVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::size_t i) const { return values_.at(i); }
  std::span<const double> values() const noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const SimplexVector&, const SimplexVector&) = default;

 private:
  std::vector<double> values_;
};

/// Finite record of (outcome, type) observations. Value type: append returns a new history.
class TypedHistory {
 public:
  TypedHistory(std::size_t outcome_count, std::size_t type_count)
      : outcome_count_(outcome_count), type_count_(type_count) {
    detail::require(outcome_count_ >= 2, "TypedHistory: need at least two outcomes");
    detail::require(type_count_ >= 1, "TypedHistory: need at least one type");
  }

  TypedHistory(std::size_t outcome_count, std::size_t type_count, std::vector<Outcome> outcomes,
               std::vector<TypeIndex> types)
      : TypedHistory(outcome_count, type_count) {
    detail::require(outcomes.size() == types.size(), "TypedHistory: outcome/type length mismatch");
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
      detail::require(outcomes[t] < outcome_count_, "TypedHistory: outcome index out of range");
      detail::require(types[t] < type_count_, "TypedHistory: type index out of range");
    }
    outcomes_ = std::move(outcomes);
    types_ = std::move(types);
  }

  /// Type-free history: every observation has type 0.
  static TypedHistory untyped(std::size_t outcome_count, std::vector<Outcome> outcomes) {
    std::vector<TypeIndex> types(outcomes.size(), 0);
    return TypedHistory(outcome_count, 1, std::move(outcomes), std::move(types));
  }

  [[nodiscard]] TypedHistory appended(Outcome outcome, TypeIndex type) const {
    detail::require(outcome < outcome_count_, "TypedHistory: outcome index out of range");
    detail::require(type < type_count_, "TypedHistory: type index out of range");
    TypedHistory next = *this;
    next.outcomes_.push_back(outcome);
    next.types_.push_back(type);
    return next;
  }

  [[nodiscard]] TypedHistory prefix(std::size_t length) const {
    detail::require(length <= size(), "TypedHistory: prefix longer than history");
    TypedHistory p(outcome_count_, type_count_);
    p.outcomes_.assign(outcomes_.begin(), outcomes_.begin() + static_cast<std::ptrdiff_t>(length));
    p.types_.assign(types_.begin(), types_.begin() + static_cast<std::ptrdiff_t>(length));
    return p;
  }

  std::size_t size() const noexcept { return outcomes_.size(); }
  bool empty() const noexcept { return outcomes_.empty(); }
  std::size_t outcome_count() const noexcept { return outcome_count_; }
  std::size_t type_count() const noexcept { return type_count_; }
  std::span<const Outcome> outcomes() const noexcept { return outcomes_; }
  std::span<const TypeIndex> types() const noexcept { return types_; }

  friend bool operator==(const TypedHistory&, const TypedHistory&) = default;

 private:
  std::size_t outcome_count_;
  std::size_t type_count_;
  std::vector<Outcome> outcomes_;
  std::vector<TypeIndex> types_;
};

/// Sufficient statistics of a history: n_ij (outcome i of type j), N_j, n_i and n.
class CountStatistics {
 public:
  CountStatistics(std::size_t outcome_count, std::size_t type_count)
      : k_(outcome_count),
        m_(type_count),
        cell_(outcome_count * type_count, 0),
        per_type_(type_count, 0),
        per_outcome_(outcome_count, 0) {}

  /// Incremental update for one appended observation.
  void add(Outcome i, TypeIndex j) {
    detail::require(i < k_ && j < m_, "CountStatistics: index out of range");
    ++cell_[i * m_ + j];
    ++per_type_[j];
    ++per_outcome_[i];
    ++total_;
  }

  std::size_t outcome_count() const noexcept { return k_; }
  std::size_t type_count() const noexcept { return m_; }

  std::size_t n(Outcome i, TypeIndex j) const { return cell_.at(i * m_ + j); }
  std::size_t type_total(TypeIndex j) const { return per_type_.at(j); }
  std::size_t outcome_total(Outcome i) const { return per_outcome_.at(i); }
  std::size_t total() const noexcept { return total_; }
  std::span<const std::size_t> outcome_totals() const noexcept { return per_outcome_; }

  friend bool operator==(const CountStatistics&, const CountStatistics&) = default;

 private:
  std::size_t k_;
  std::size_t m_;
  std::vector<std::size_t> cell_;  // row-major, outcome-by-type
  std::vector<std::size_t> per_type_;
  std::vector<std::size_t> per_outcome_;
  std::size_t total_ = 0;
};

inline CountStatistics counts_from_history(const TypedHistory& h) {
  CountStatistics c(h.outcome_count(), h.type_count());
  for (std::size_t t = 0; t < h.size(); ++t) c.add(h.outcomes()[t], h.types()[t]);
  return c;
}

// ---------------------------------------------------------------------------
// Rule contracts

/// history x next type -> distribution over the next outcome. Must be deterministic.
/// type_count() == 0 marks a type-blind rule usable with any type space.
template <class R>
concept PredictiveRule = requires(const R& r, const TypedHistory& h, TypeIndex t) {
  { r.predict(h, t) } -> std::convertible_to<SimplexVector>;
  { r.outcome_count() } -> std::convertible_to<std::size_t>;
  { r.type_count() } -> std::convertible_to<std::size_t>;
};

/// A rule that reads the history only through its counts. Lets long streams run in O(1) memory.
template <class R>
concept CountBasedRule = PredictiveRule<R> && requires(const R& r, const CountStatistics& c, TypeIndex t) {
  { r.predict(c, t) } -> std::convertible_to<SimplexVector>;
};

/// A rule exposing an evaluation path that receives stipulated types beyond the next one.
template <class R>
concept FutureAwareRule =
    PredictiveRule<R> && requires(const R& r, const TypedHistory& h, TypeIndex t, std::span<const TypeIndex> f) {
      { r.predict(h, t, f) } -> std::convertible_to<SimplexVector>;
    };

/// Prediction with future types stipulated; rules without a future-aware path ignore them.
template <PredictiveRule R>
SimplexVector predict_given_future(const R& rule, const TypedHistory& h, TypeIndex next_type,
                                   std::span<const TypeIndex> future_types) {
  if constexpr (FutureAwareRule<R>) {
    return rule.predict(h, next_type, future_types);
  } else {
    return rule.predict(h, next_type);
  }
}

namespace detail {

template <PredictiveRule R>
void check_rule_compatible(const R& rule, const TypedHistory& h) {
  require(h.outcome_count() == rule.outcome_count(), "history outcome space does not match rule");
  require(rule.type_count() == 0 || h.type_count() == rule.type_count(),
          "history type space does not match rule");
}

}  // namespace detail

/// Probability of `outcomes` at `types`, continuing `context`, by the chain rule.
template <PredictiveRule R>
double continuation_probability(const R& rule, const TypedHistory& context, std::span<const Outcome> outcomes,
                                std::span<const TypeIndex> types) {
  detail::require(outcomes.size() == types.size(), "joint_probability: outcome/type length mismatch");
  detail::check_rule_compatible(rule, context);
  TypedHistory prefix = context;
  double p = 1.0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    detail::require(outcomes[t] < rule.outcome_count(), "joint_probability: outcome index out of range");
    detail::require(types[t] < context.type_count(), "joint_probability: type index out of range");
    p *= rule.predict(prefix, types[t])[outcomes[t]];
    if (t + 1 < outcomes.size()) prefix = prefix.appended(outcomes[t], types[t]);
  }
  return p;
}

/// Product over t of predict(prefix_t, types[t])[outcomes[t]]; 1 for the empty sequence.
template <PredictiveRule R>
double joint_probability(const R& rule, std::span<const Outcome> outcomes, std::span<const TypeIndex> types) {
  std::size_t m = rule.type_count();
  if (m == 0) {
    m = 1;
    for (TypeIndex t : types) m = std::max(m, t + 1);
  }
  return continuation_probability(rule, TypedHistory(rule.outcome_count(), m), outcomes, types);
}

template <PredictiveRule R>
double joint_probability(const R& rule, const TypedHistory& h) {
  return continuation_probability(rule, TypedHistory(h.outcome_count(), h.type_count()), h.outcomes(), h.types());
}

/// Predictive computed as joint(h + (i, next_type)) / joint(h). Cross-checks rule.predict.
template <PredictiveRule R>
SimplexVector predictive_from_joint(const R& rule, const TypedHistory& h, TypeIndex next_type) {
  detail::require(next_type < h.type_count(), "predictive_from_joint: type index out of range");
  const double base = joint_probability(rule, h);
  if (!(base > 0.0)) {
    throw RegularityViolation("predictive_from_joint: history has probability zero");
  }
  std::vector<double> out(rule.outcome_count());
  for (Outcome i = 0; i < out.size(); ++i) out[i] = joint_probability(rule, h.appended(i, next_type)) / base;
  return SimplexVector::normalized(std::move(out));
}

/// Type-erased rule for runtime selection (CLI, heterogeneous comparisons).
class AnyRule {
 public:
  template <PredictiveRule R>
    requires(!std::same_as<std::remove_cvref_t<R>, AnyRule>)
  AnyRule(R rule)  // NOLINT(google-explicit-constructor)
      : self_(std::make_shared<Model<R>>(std::move(rule))) {}

  SimplexVector predict(const TypedHistory& h, TypeIndex t) const { return self_->predict(h, t); }
  SimplexVector predict(const TypedHistory& h, TypeIndex t, std::span<const TypeIndex> f) const {
    return self_->predict_future(h, t, f);
  }
  /// Throws InvalidInput unless the wrapped rule is count based.
  SimplexVector predict(const CountStatistics& c, TypeIndex t) const { return self_->predict_counts(c, t); }
  bool count_based() const noexcept { return self_->count_based(); }
  std::size_t outcome_count() const { return self_->outcome_count(); }
  std::size_t type_count() const { return self_->type_count(); }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual SimplexVector predict(const TypedHistory&, TypeIndex) const = 0;
    virtual SimplexVector predict_future(const TypedHistory&, TypeIndex, std::span<const TypeIndex>) const = 0;
    virtual SimplexVector predict_counts(const CountStatistics&, TypeIndex) const = 0;
    virtual bool count_based() const noexcept = 0;
    virtual std::size_t outcome_count() const = 0;
    virtual std::size_t type_count() const = 0;
  };

  template <class R>
  struct Model final : Concept {
    explicit Model(R r) : rule(std::move(r)) {}
    SimplexVector predict(const TypedHistory& h, TypeIndex t) const override { return rule.predict(h, t); }
    SimplexVector predict_future(const TypedHistory& h, TypeIndex t, std::span<const TypeIndex> f) const override {
      return predict_given_future(rule, h, t, f);
    }
    SimplexVector predict_counts(const CountStatistics& c, TypeIndex t) const override {
      if constexpr (CountBasedRule<R>) {
        return rule.predict(c, t);
      } else {
        throw InvalidInput("rule does not predict from counts alone");
      }
    }
    bool count_based() const noexcept override { return CountBasedRule<R>; }
    std::size_t outcome_count() const override { return rule.outcome_count(); }
    std::size_t type_count() const override { return rule.type_count(); }
    R rule;
  };

  std::shared_ptr<const Concept> self_;
};

static_assert(CountBasedRule<AnyRule>);
static_assert(FutureAwareRule<AnyRule>);

}  // namespace inductive

#endif  // INDUCTIVE_CORE_HPP
