#ifndef INDUCTIVE_TESTS_SUPPORT_HPP
#define INDUCTIVE_TESTS_SUPPORT_HPP

// Test-only rules and oracles. Nothing here calls into the code under test for the
// quantity it is meant to check.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "inductive/inductive.hpp"

namespace inductive::test_support {

/// Next outcome copies the previous one with high probability: the joint depends on order.
class StickyRule {
 public:
  explicit StickyRule(std::size_t k) : k_(k) {}
  SimplexVector predict(const TypedHistory& h, TypeIndex) const {
    if (h.empty()) return SimplexVector::uniform(k_);
    std::vector<double> p(k_, 0.2 / static_cast<double>(k_ - 1));
    p[h.outcomes().back()] = 0.8;
    return SimplexVector::normalized(std::move(p));
  }
  std::size_t outcome_count() const { return k_; }
  std::size_t type_count() const { return 2; }

 private:
  std::size_t k_;
};

/// Looks at the first stipulated future type.
class PeekingRule {
 public:
  explicit PeekingRule(std::size_t k) : k_(k) {}
  SimplexVector predict(const TypedHistory&, TypeIndex) const { return SimplexVector::uniform(k_); }
  SimplexVector predict(const TypedHistory& h, TypeIndex t, std::span<const TypeIndex> future) const {
    if (future.empty() || future[0] == 0) return predict(h, t);
    std::vector<double> p(k_, 1.0);
    p[0] = 3.0;
    return SimplexVector::normalized(std::move(p));
  }
  std::size_t outcome_count() const { return k_; }
  std::size_t type_count() const { return 2; }

 private:
  std::size_t k_;
};

/// A separate basic system per type: partially exchangeable by construction.
class PerTypeCarnapRule {
 public:
  PerTypeCarnapRule(std::vector<double> a0, std::vector<double> a1) : a_{std::move(a0), std::move(a1)} {}
  SimplexVector predict(const TypedHistory& h, TypeIndex t) const {
    std::vector<double> num = a_[t];
    double n = 0;
    for (std::size_t s = 0; s < h.size(); ++s) {
      if (h.types()[s] != t) continue;
      num[h.outcomes()[s]] += 1.0;
      n += 1.0;
    }
    double total = n;
    for (double a : a_[t]) total += a;
    for (double& x : num) x /= total;
    return SimplexVector::normalized(std::move(num));
  }
  std::size_t outcome_count() const { return a_[0].size(); }
  std::size_t type_count() const { return 2; }

 private:
  std::array<std::vector<double>, 2> a_;
};

/// Chained hand formula (n_i + a_i) / (n + sum a), written out independently of the library.
inline double carnap_chain_oracle(const std::vector<std::size_t>& xs, const std::vector<double>& alpha) {
  std::vector<double> c(alpha.size(), 0.0);
  double total = 0.0;
  for (double a : alpha) total += a;
  double p = 1.0;
  double n = 0.0;
  for (std::size_t x : xs) {
    p *= (c[x] + alpha[x]) / (n + total);
    c[x] += 1.0;
    n += 1.0;
  }
  return p;
}

/// Chained analogical formula with explicit (n_i0, n_i1) bookkeeping.
inline double analogy_chain_oracle(const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys,
                                   const std::vector<std::array<double, 2>>& alpha, double beta, double gamma) {
  const std::size_t k = alpha.size();
  std::vector<std::array<double, 2>> n(k, {0.0, 0.0});
  std::array<double, 2> N{0.0, 0.0};
  std::array<double, 2> A{0.0, 0.0};
  for (const auto& a : alpha) {
    A[0] += a[0];
    A[1] += a[1];
  }
  double p = 1.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const std::size_t own = ys[t], other = 1 - ys[t];
    const double w = own == 0 ? beta : gamma;
    const std::size_t i = xs[t];
    p *= (n[i][own] + w * n[i][other] + alpha[i][own]) / (N[own] + w * N[other] + A[own]);
    n[i][own] += 1.0;
    N[own] += 1.0;
  }
  return p;
}

inline std::vector<std::vector<std::size_t>> all_words(std::size_t base, std::size_t len) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> w(len, 0);
  while (true) {
    out.push_back(w);
    std::size_t pos = len;
    bool carried = true;
    while (pos > 0 && carried) {
      --pos;
      if (++w[pos] < base) {
        carried = false;
      } else {
        w[pos] = 0;
      }
    }
    if (carried) return out;
  }
}

}  // namespace inductive::test_support

#endif  // INDUCTIVE_TESTS_SUPPORT_HPP
