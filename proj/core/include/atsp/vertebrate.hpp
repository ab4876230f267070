#pragma once

#include <functional>
#include <vector>

#include "atsp/graph.hpp"
#include "atsp/instance.hpp"
#include "atsp/lp.hpp"
#include "atsp/rational.hpp"

namespace atsp {

// Strongly laminar instance with a backbone subtour touching every member of
// size at least two. `backbone_vertices` is V(B); it is kept explicitly so
// that an empty backbone can still name its single vertex.
struct VertebratePair {
  StronglyLaminarInstance instance;
  EdgeMultiset backbone;
  VertexSet backbone_vertices;
};

// Backbone Eulerian and connected, V(B) consistent with its edges and every
// non-singleton member touched. Throws InternalError otherwise.
void validate_vertebrate_pair(const VertebratePair& pair);

// Sum of 2y_v over singleton members {v} with v outside V(B).
Rational offbackbone_weight(const VertebratePair& pair);

// Returns F such that E(B) + F is a tour of the pair's instance.
using VertebrateSolver = std::function<EdgeMultiset(const VertebratePair&)>;

struct Backbone {
  EdgeMultiset edges;           // P_{u*,v*} followed by P_{v*,u*}
  VertexSet vertices;           // V(B); {u*} when both paths are empty
  std::vector<int> untouched;   // maximal members strictly inside W avoiding V(B)
  ValueAndDw dw;
};

Backbone construct_backbone(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W);

struct ReductionStats {
  int calls = 0;
  int solver_calls = 0;
  int max_contracted_size = 0;
};

// Recursive reduction: a tour in G[W] (connected on W, Eulerian, inside E[W]).
// The solver is expected to satisfy c(F) <= kappa LP + eta * offbackbone_weight.
EdgeMultiset reduce_and_solve(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W,
                              const VertebrateSolver& solver, const Rational& kappa, const Rational& eta,
                              ReductionStats* stats = nullptr);

struct TourCertificate {
  EdgeMultiset tour;            // over the input graph
  std::vector<EdgeId> walk;     // closed walk of input edge ids
  Rational cost;
  Rational lp_value;
  Rational ratio;
};

struct SolveStats {
  LpStats lp;
  ReductionStats reduction;
  int family_size = 0;
  double seconds_lp = 0;
  double seconds_reduction = 0;
};

// Solver for vertebrate pairs with guarantee constants.
struct VertebrateAlgorithm {
  VertebrateSolver solve;
  Rational kappa;
  Rational eta;
};

// Full pipeline with the given vertebrate pair algorithm; the final ratio is
// checked against 3 kappa + eta + 2.
TourCertificate solve_atsp(const Digraph& g, const VertebrateAlgorithm& algorithm, SolveStats* stats = nullptr);

// Same with the default (2, 14 + epsilon) algorithm.
TourCertificate solve_atsp(const Digraph& g, const Rational& epsilon, SolveStats* stats = nullptr);

}  // namespace atsp
