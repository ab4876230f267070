#pragma once

#include <vector>

#include "atsp/graph.hpp"
#include "atsp/laminar.hpp"
#include "atsp/rational.hpp"

namespace atsp {

// (G, L, x, y) with costs induced by the family weights: an edge costs the
// total weight of the members it crosses. Immutable after construction.
class StronglyLaminarInstance {
 public:
  StronglyLaminarInstance() = default;
  // The costs on `g` are discarded and replaced by induced costs.
  StronglyLaminarInstance(const Digraph& g, LaminarFamily family, std::vector<Rational> x);

  const Digraph& graph() const { return g_; }
  const LaminarFamily& family() const { return family_; }
  int num_vertices() const { return g_.num_vertices(); }
  const std::vector<Rational>& x() const { return x_; }
  const Rational& x(EdgeId e) const { return x_[e]; }
  const Rational& cost(EdgeId e) const { return g_.edge(e).cost; }
  Rational lp_value() const;
  Rational vertex_weight(VertexId v) const { return family_.vertex_weight(v); }

 private:
  Digraph g_;
  LaminarFamily family_;
  std::vector<Rational> x_;
};

// Runs every structural check of a strongly laminar instance: G and each
// G[L] strongly connected, x a feasible LP point that is tight on every
// member and positive everywhere, weights positive, induced costs exact and
// c(x) equal to the sum of 2y_L.
void validate_strongly_laminar(const StronglyLaminarInstance& inst);

// x(delta(U)) over edges of the instance graph.
Rational cut_value(const Digraph& g, const std::vector<Rational>& x, const std::vector<char>& in_set);

// Maximum s-t flow with capacities x.
Rational min_cut_value(const Digraph& g, const std::vector<Rational>& x, VertexId s, VertexId t);

// Number of maximal runs of consecutive path vertices inside member i.
int visit_runs(const StronglyLaminarInstance& inst, const std::vector<EdgeId>& path, VertexId start, int i);

// A v-w path inside the minimal common member that visits every member in one
// contiguous run. Starts from a fewest-edges path and repairs it.
std::vector<EdgeId> nice_path(const StronglyLaminarInstance& inst, VertexId v, VertexId w);

// Fixed nice path for every ordered pair, computed once.
class NicePathTable {
 public:
  explicit NicePathTable(const StronglyLaminarInstance& inst);
  const std::vector<EdgeId>& path(VertexId u, VertexId v) const { return paths_[u * n_ + v]; }
  const Rational& path_cost(VertexId u, VertexId v) const { return costs_[u * n_ + v]; }
  int num_vertices() const { return n_; }

 private:
  int n_;
  std::vector<std::vector<EdgeId>> paths_;
  std::vector<Rational> costs_;
};

// value(W): sum of 2y_L over members strictly inside W.
Rational family_value(const StronglyLaminarInstance& inst, int W);

// Sum of y_L over members L strictly inside W that contain v.
Rational inner_weight(const StronglyLaminarInstance& inst, int W, VertexId v);

// Cost of the stored u-v path, after checking it against the crossing
// identity relative to W.
Rational nice_path_cost_identity(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W,
                                 VertexId u, VertexId v);

struct ValueAndDw {
  Rational value;
  Rational dw;
  VertexId u = -1;
  VertexId v = -1;
};

// value(W) and D_W with the lexicographically first maximizing pair,
// preferring u != v on ties.
ValueAndDw value_and_dw(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W);

// Vertex list of W (member or whole set).
VertexSet members_of(const StronglyLaminarInstance& inst, int W);

}  // namespace atsp
