#ifndef INDUCTIVE_ANALOGY_HPP
#define INDUCTIVE_ANALOGY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "core.hpp"
#include "random.hpp"

namespace inductive {

// Analogical inductive logic over two types (type indices 0 and 1).
//
//   P(i | type 0) = (n_i0 + beta  n_i1 + alpha_i0) / (N_0 + beta  N_1 + sum_j alpha_j0)
//   P(i | type 1) = (n_i1 + gamma n_i0 + alpha_i1) / (N_1 + gamma N_0 + sum_j alpha_j1)
//
// beta carries type-1 evidence into type-0 predictions, gamma the converse. More than two
// types would need a full matrix of cross weights; the parameter layout is per type column
// but validation pins the type count at two.

inline constexpr std::size_t kAnalogyTypes = 2;

class AnalogyParams {
 public:
  /// alpha[i] = {alpha_i0, alpha_i1}. With self_analogy_bound set, beta and gamma must not exceed 1.
  AnalogyParams(std::vector<std::array<double, 2>> alpha, double beta, double gamma, bool self_analogy_bound = false)
      : alpha_(std::move(alpha)), beta_(beta), gamma_(gamma), self_analogy_bound_(self_analogy_bound) {
    detail::require(alpha_.size() >= 2, "AnalogyParams: need at least two outcomes");
    for (const auto& row : alpha_) {
      for (double a : row) detail::require(std::isfinite(a) && a > 0.0, "AnalogyParams: every alpha must be positive");
    }
    detail::require(std::isfinite(beta_) && beta_ >= 0.0, "AnalogyParams: beta must be nonnegative");
    detail::require(std::isfinite(gamma_) && gamma_ >= 0.0, "AnalogyParams: gamma must be nonnegative");
    if (self_analogy_bound_) {
      detail::require(beta_ <= 1.0 && gamma_ <= 1.0, "AnalogyParams: self-analogy bound requires beta, gamma <= 1");
    }
  }

  /// Same alpha for both types.
  static AnalogyParams symmetric(std::vector<double> alpha, double beta, double gamma) {
    std::vector<std::array<double, 2>> a;
    for (double x : alpha) a.push_back({x, x});
    return AnalogyParams(std::move(a), beta, gamma);
  }

  std::size_t outcome_count() const noexcept { return alpha_.size(); }
  double alpha(Outcome i, TypeIndex j) const { return alpha_.at(i).at(j); }
  const std::vector<std::array<double, 2>>& alpha() const noexcept { return alpha_; }
  double alpha_total(TypeIndex j) const {
    double s = 0.0;
    for (const auto& row : alpha_) s += row.at(j);
    return s;
  }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  /// Weight with which evidence of the other type enters predictions for type j.
  double cross_weight(TypeIndex j) const { return j == 0 ? beta_ : gamma_; }
  bool self_analogy_bound() const noexcept { return self_analogy_bound_; }

  /// The derivation behind the rule assumes at least three outcomes; with two the formula is
  /// still well defined but is not characterized by the symmetry postulates.
  bool two_outcome_caveat() const noexcept { return alpha_.size() == 2; }

  friend bool operator==(const AnalogyParams&, const AnalogyParams&) = default;

 private:
  std::vector<std::array<double, 2>> alpha_;
  double beta_;
  double gamma_;
  bool self_analogy_bound_;
};

inline SimplexVector analogical_predict(const CountStatistics& counts, const AnalogyParams& p, TypeIndex next_type) {
  detail::require(counts.type_count() == kAnalogyTypes, "analogical_predict: history must have exactly two types");
  detail::require(next_type < kAnalogyTypes, "analogical_predict: next type must be 0 or 1");
  detail::require(counts.outcome_count() == p.outcome_count(), "analogical_predict: outcome count mismatch");
  const TypeIndex own = next_type;
  const TypeIndex other = 1 - next_type;
  const double w = p.cross_weight(own);
  const double denom = static_cast<double>(counts.type_total(own)) + w * static_cast<double>(counts.type_total(other)) +
                       p.alpha_total(own);
  std::vector<double> out(p.outcome_count());
  for (Outcome i = 0; i < out.size(); ++i) {
    out[i] = (static_cast<double>(counts.n(i, own)) + w * static_cast<double>(counts.n(i, other)) + p.alpha(i, own)) /
             denom;
  }
  return SimplexVector(std::move(out));
}

class AnalogicalRule {
 public:
  explicit AnalogicalRule(AnalogyParams params) : params_(std::move(params)) {}

  SimplexVector predict(const CountStatistics& c, TypeIndex next_type) const {
    return analogical_predict(c, params_, next_type);
  }
  SimplexVector predict(const TypedHistory& h, TypeIndex next_type) const {
    return predict(counts_from_history(h), next_type);
  }
  /// Stipulated future types carry no information about the next outcome.
  SimplexVector predict(const TypedHistory& h, TypeIndex next_type, std::span<const TypeIndex> future_types) const {
    for (TypeIndex t : future_types) detail::require(t < kAnalogyTypes, "future type out of range");
    return predict(h, next_type);
  }
  std::size_t outcome_count() const noexcept { return params_.outcome_count(); }
  std::size_t type_count() const noexcept { return kAnalogyTypes; }
  const AnalogyParams& params() const noexcept { return params_; }

 private:
  AnalogyParams params_;
};

// ---------------------------------------------------------------------------
// Type process and urn scheme

/// i.i.d. type process with full support. Defaults to uniform over the two types.
class TypeProcess {
 public:
  TypeProcess() : probs_{0.5, 0.5} {}
  explicit TypeProcess(std::vector<double> probs) : probs_(std::move(probs)) {
    detail::require(!probs_.empty(), "TypeProcess: empty distribution");
    double s = 0.0;
    for (double q : probs_) {
      detail::require(std::isfinite(q) && q > 0.0, "TypeProcess: every type needs positive probability");
      s += q;
    }
    detail::require(std::abs(s - 1.0) <= 1e-9, "TypeProcess: probabilities must sum to 1");
  }

  std::size_t type_count() const noexcept { return probs_.size(); }
  std::span<const double> probabilities() const noexcept { return probs_; }
  TypeIndex draw(Rng& rng) const { return rng.categorical(probs_); }

  std::vector<TypeIndex> sample(std::size_t length, Rng& rng) const {
    std::vector<TypeIndex> out(length);
    for (auto& t : out) t = draw(rng);
    return out;
  }

 private:
  std::vector<double> probs_;
};

/// Two-urn reinforcement scheme. Urn j starts with weight alpha_ij on label i. A draw from urn j
/// returns the ball plus weight 1 on the drawn label in urn j, and deposits the cross weight on
/// the same label in the other urn: gamma into urn 1 after a draw from urn 0, beta into urn 0
/// after a draw from urn 1. The path law matches analogical_predict step by step.
class AnalogyUrn {
 public:
  explicit AnalogyUrn(const AnalogyParams& p)
      : beta_(p.beta()), gamma_(p.gamma()), weights_{std::vector<double>(p.outcome_count()),
                                                     std::vector<double>(p.outcome_count())} {
    for (Outcome i = 0; i < p.outcome_count(); ++i) {
      weights_[0][i] = p.alpha(i, 0);
      weights_[1][i] = p.alpha(i, 1);
    }
  }

  Outcome draw(TypeIndex urn, Rng& rng) {
    detail::require(urn < kAnalogyTypes, "AnalogyUrn: type must be 0 or 1");
    const Outcome i = rng.categorical(weights_[urn]);
    weights_[urn][i] += 1.0;
    weights_[1 - urn][i] += urn == 0 ? gamma_ : beta_;
    return i;
  }

  std::span<const double> weights(TypeIndex urn) const { return weights_.at(urn); }

 private:
  double beta_;
  double gamma_;
  std::array<std::vector<double>, 2> weights_;
};

inline std::vector<Outcome> urn_simulate(const AnalogyParams& p, std::span<const TypeIndex> type_sequence,
                                         std::uint64_t seed, std::uint64_t stream = 0) {
  detail::require(!type_sequence.empty(), "urn_simulate: empty type sequence");
  AnalogyUrn urn(p);
  Rng rng(seed, stream);
  std::vector<Outcome> out;
  out.reserve(type_sequence.size());
  for (TypeIndex t : type_sequence) out.push_back(urn.draw(t, rng));
  return out;
}

/// Draws the types from `process` first, then runs the urns along them.
inline TypedHistory urn_simulate(const AnalogyParams& p, const TypeProcess& process, std::size_t length,
                                 std::uint64_t seed) {
  detail::require(process.type_count() == kAnalogyTypes, "urn_simulate: type process must cover two types");
  Rng type_rng(seed, 0x7479706573ULL);
  auto types = process.sample(length, type_rng);
  auto outcomes = urn_simulate(p, types, seed);
  return TypedHistory(p.outcome_count(), kAnalogyTypes, std::move(outcomes), std::move(types));
}

// ---------------------------------------------------------------------------
// Diagnostics

struct BetaPositivityRow {
  Outcome outcome;
  double lhs;  // P[X2 = i | X1 = i, Y1 = 1, Y2 = 0]
  double rhs;  // P[X1 = i | Y1 = 0]
  bool strict;
  bool equivalence_holds;  // (beta > 0) == strict
};

struct BetaPositivityReport {
  double beta;
  std::vector<BetaPositivityRow> rows;
  std::vector<double> sweep_betas;
  std::vector<std::vector<double>> sweep_lhs;  // [outcome][sweep point]
  bool monotone = true;

  bool passed() const {
    for (const auto& r : rows) {
      if (!r.equivalence_holds) return false;
    }
    return monotone;
  }
};

/// One observation of outcome i at type 1, then predict type 0; vs the type-0 prior.
inline double cross_type_repeat_probability(const AnalogyParams& p, Outcome i) {
  const AnalogicalRule rule(p);
  const TypedHistory h(p.outcome_count(), kAnalogyTypes, {i}, {1});
  return rule.predict(h, 0)[i];
}

inline BetaPositivityReport check_beta_positivity(const AnalogyParams& p,
                                                  std::vector<double> sweep = {0.0, 0.25, 0.5, 1.0, 2.0}) {
  const AnalogicalRule rule(p);
  const TypedHistory empty(p.outcome_count(), kAnalogyTypes);
  const SimplexVector prior = rule.predict(empty, 0);

  BetaPositivityReport rep;
  rep.beta = p.beta();
  for (Outcome i = 0; i < p.outcome_count(); ++i) {
    const double lhs = cross_type_repeat_probability(p, i);
    const double rhs = prior[i];
    const bool strict = lhs > rhs;
    rep.rows.push_back({i, lhs, rhs, strict, (p.beta() > 0.0) == strict});
  }

  rep.sweep_betas = std::move(sweep);
  rep.sweep_lhs.assign(p.outcome_count(), {});
  for (double b : rep.sweep_betas) {
    const AnalogyParams q(p.alpha(), b, p.gamma());
    for (Outcome i = 0; i < p.outcome_count(); ++i) rep.sweep_lhs[i].push_back(cross_type_repeat_probability(q, i));
  }
  for (Outcome i = 0; i < p.outcome_count(); ++i) {
    for (std::size_t s = 1; s < rep.sweep_betas.size(); ++s) {
      const bool increasing_beta = rep.sweep_betas[s] > rep.sweep_betas[s - 1];
      if (increasing_beta && !(rep.sweep_lhs[i][s] > rep.sweep_lhs[i][s - 1])) rep.monotone = false;
    }
  }
  return rep;
}

struct SelfAnalogyRow {
  Outcome outcome;
  TypeIndex type;
  double same_type;   // P[X2 = i | X1 = i, Y1 = j, Y2 = j]
  double cross_type;  // P[X2 = i | X1 = i, Y1 = k, Y2 = j], k != j
  bool holds;
};

struct SelfAnalogyReport {
  std::vector<SelfAnalogyRow> rows;
  bool all_hold = true;
  bool within_unit_bound = true;  // beta <= 1 && gamma <= 1
  /// The inequality holds everywhere exactly when both cross weights are at most 1.
  bool consistent() const { return all_hold == within_unit_bound; }
};

inline SelfAnalogyReport check_self_analogy(const AnalogyParams& p) {
  const AnalogicalRule rule(p);
  SelfAnalogyReport rep;
  rep.within_unit_bound = p.beta() <= 1.0 && p.gamma() <= 1.0;
  for (TypeIndex j = 0; j < kAnalogyTypes; ++j) {
    for (Outcome i = 0; i < p.outcome_count(); ++i) {
      const double same = rule.predict(TypedHistory(p.outcome_count(), kAnalogyTypes, {i}, {j}), j)[i];
      const double cross = rule.predict(TypedHistory(p.outcome_count(), kAnalogyTypes, {i}, {1 - j}), j)[i];
      const bool holds = same >= cross;
      rep.all_hold = rep.all_hold && holds;
      rep.rows.push_back({i, j, same, cross, holds});
    }
  }
  return rep;
}

/// Limit of the type-`next_type` predictive when per-type frequencies converge to `freqs[j]`
/// and the share of type-0 observations converges to `type0_share`. The alpha terms vanish.
inline SimplexVector limiting_predictive(const std::array<SimplexVector, 2>& freqs, const AnalogyParams& p,
                                         double type0_share, TypeIndex next_type = 0) {
  detail::require(type0_share >= 0.0 && type0_share <= 1.0, "limiting_predictive: type share must lie in [0,1]");
  detail::require(next_type < kAnalogyTypes, "limiting_predictive: next type must be 0 or 1");
  detail::require(freqs[0].size() == p.outcome_count() && freqs[1].size() == p.outcome_count(),
                  "limiting_predictive: frequency vectors must match the outcome count");
  const TypeIndex own = next_type;
  const TypeIndex other = 1 - next_type;
  const double own_share = own == 0 ? type0_share : 1.0 - type0_share;
  const double w = p.cross_weight(own);
  const double denom = own_share + w * (1.0 - own_share);
  if (!(denom > 0.0)) {
    throw InvalidInput("limiting_predictive: limit undefined (type never observed and cross weight is zero)");
  }
  std::vector<double> out(p.outcome_count());
  for (Outcome i = 0; i < out.size(); ++i) {
    out[i] = (own_share * freqs[own][i] + w * (1.0 - own_share) * freqs[other][i]) / denom;
  }
  return SimplexVector::normalized(std::move(out));
}

}  // namespace inductive

#endif  // INDUCTIVE_ANALOGY_HPP
