#pragma once

#include <map>
#include <optional>
#include <vector>

#include "atsp/graph.hpp"
#include "atsp/instance.hpp"
#include "atsp/rational.hpp"

namespace atsp {

struct PrimalLp {
  std::vector<Rational> x;  // per edge
  Rational objective;
};

struct DualLp {
  std::vector<Rational> a;            // per vertex
  std::map<VertexSet, Rational> y;    // positive entries only
  Rational objective;                 // sum of 2y_U
};

struct LpStats {
  int rounds = 0;
  int cuts = 0;
  long pivots = 0;
};

// Subtour-elimination LP by cutting planes over an exact simplex. Throws
// InfeasibleInstance when g is not strongly connected.
std::pair<PrimalLp, DualLp> solve_atsp_lp(const Digraph& g, LpStats* stats = nullptr);

// Some U with x(delta(U)) < 2, never containing vertex 0; nullopt if none.
std::optional<VertexSet> separate_subtour(const Digraph& g, const PrimalLp& x);
// Every distinct violated set found by the 2(n-1) flow computations.
std::vector<VertexSet> separate_all(const Digraph& g, const std::vector<Rational>& x);

// a_w - a_v + sum_{U: e in delta(U)} y_U <= c(e) on every edge.
bool dual_feasible(const Digraph& g, const DualLp& dual);
Rational dual_objective(const DualLp& dual);
// Left-hand side of the dual constraint for edge e.
Rational dual_load(const Digraph& g, const DualLp& dual, EdgeId e);

// Makes the support laminar. Sets are first rewritten to avoid vertex n-1.
DualLp uncross_dual(const Digraph& g, const DualLp& dual);

// Makes every support set induce a strongly connected subgraph of g, where g
// is the support graph of x.
DualLp make_strongly_laminar(const Digraph& g, const PrimalLp& x, const DualLp& dual);

struct LaminarBuild {
  StronglyLaminarInstance instance;
  Rational lp_value;
  std::vector<EdgeId> edge_origin;  // instance edge -> input edge
  PrimalLp primal;
  DualLp dual;       // final dual on the support graph
  LpStats stats;
};

LaminarBuild build_strongly_laminar_instance(const Digraph& g);

}  // namespace atsp
