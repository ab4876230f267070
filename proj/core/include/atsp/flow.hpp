#pragma once

#include <vector>

#include "atsp/rational.hpp"

namespace atsp {

// Edmonds-Karp over exact rational capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int n);
  int add_arc(int from, int to, Rational capacity);
  Rational run(int s, int t);
  // Vertices reachable from s in the residual graph after run().
  std::vector<char> source_side() const { return reach_; }
  Rational flow(int arc) const;

 private:
  struct Arc {
    int to;
    Rational residual;
    Rational capacity;
  };
  int n_;
  std::vector<Arc> arcs_;  // arc 2k forward, 2k+1 reverse
  std::vector<std::vector<int>> adj_;
  std::vector<char> reach_;
};

// Min-cost circulation with lower/upper bounds and nonnegative costs via
// successive shortest paths with potentials. Integral bounds give an
// integral optimum.
class MinCostCirculation {
 public:
  explicit MinCostCirculation(int n);
  int add_node();
  int num_nodes() const { return n_; }
  int add_arc(int from, int to, Rational lower, Rational upper, Rational cost);
  bool solve();
  const Rational& flow(int arc) const { return flow_[arc]; }
  Rational total_cost() const;
  int num_arcs() const { return static_cast<int>(from_.size()); }

  // True iff the residual graph of the current flow has no negative cycle.
  bool certify_optimal() const;

 private:
  int n_;
  std::vector<int> from_, to_;
  std::vector<Rational> lower_, upper_, cost_, flow_;
};

}  // namespace atsp
