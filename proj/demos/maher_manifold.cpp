// Positive prior weight on the Wright manifold is neither necessary nor sufficient for the
// analogy effect between Q-predicates that share a family value.
//
// Prints a CSV table: construction,w,p_q1_given_q2,p_q1_given_q4,analogy_effect
//   maher            Dirichlet on Q + product of family basic systems (manifold weight 1-w)
//   barycenter       Dirichlet on Q + point mass at the barycenter (on the manifold, weight 1-w)
//   edge_mixture     Dirichlet mixture concentrated near the four similarity edges (no manifold weight)

#include <cstdio>
#include <vector>

#include "inductive/inductive.hpp"

using namespace inductive;

namespace {

// P(second | first) for a sequence probability function over Q-predicates.
template <class SeqProb>
double conditional(SeqProb prob, Outcome first, Outcome second) {
  const std::vector<Outcome> one{first};
  const std::vector<Outcome> two{first, second};
  return prob(two) / prob(one);
}

void row(const char* name, double w, double a, double b) {
  std::printf("%s,%.2f,%.6f,%.6f,%s\n", name, w, a, b, a > b + 1e-12 ? "yes" : "no");
}

}  // namespace

int main() {
  const Outcome q1 = QPredicate::index(0, 0), q2 = QPredicate::index(1, 0), q4 = QPredicate::index(1, 1);
  const CarnapParams flat4({1, 1, 1, 1});
  std::printf("construction,w,p_q1_given_q2,p_q1_given_q4,analogy_effect\n");

  for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const MaherParams p = MaherParams::flat(w);
    auto prob = [&](const std::vector<Outcome>& qs) { return maher_sequence_probability(qs, p); };
    row("maher", w, conditional(prob, q2, q1), conditional(prob, q4, q1));
  }

  // Manifold weight sits entirely on the barycenter: i.i.d. uniform trials.
  for (double w : {0.0, 0.25, 0.5, 0.75}) {
    auto prob = [&](const std::vector<Outcome>& qs) {
      double iid = 1.0;
      for (std::size_t t = 0; t < qs.size(); ++t) iid *= 0.25;
      return w * polya_sequence_probability(qs, flat4) + (1.0 - w) * iid;
    };
    row("barycenter", w, conditional(prob, q2, q1), conditional(prob, q4, q1));
  }

  // Similar Q-predicates share a family value: edges Q1-Q2, Q2-Q4, Q4-Q3, Q3-Q1.
  const Outcome q3 = QPredicate::index(0, 1);
  std::vector<CarnapParams> comps;
  for (auto [a, b] : {std::pair{q1, q2}, {q2, q4}, {q4, q3}, {q3, q1}}) {
    std::vector<double> alpha(4, 0.2);
    alpha[a] = 2.0;
    alpha[b] = 2.0;
    comps.emplace_back(alpha);
  }
  const MixtureModel edges(comps);
  auto prob = [&](const std::vector<Outcome>& qs) {
    double s = 0.0;
    for (std::size_t c = 0; c < edges.size(); ++c) s += edges.weights()[c] * polya_sequence_probability(qs, edges.components()[c]);
    return s;
  };
  row("edge_mixture", 0.0, conditional(prob, q2, q1), conditional(prob, q4, q1));
  return 0;
}
