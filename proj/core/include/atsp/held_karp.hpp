#pragma once

#include "atsp/graph.hpp"
#include "atsp/rational.hpp"

namespace atsp {

constexpr int kHeldKarpMaxVertices = 18;

// Exact optimum closed walk visiting every vertex: Held-Karp on the metric
// closure. Throws InputError above kHeldKarpMaxVertices vertices and
// InfeasibleInstance when g is not strongly connected.
Rational held_karp_opt(const Digraph& g);

}  // namespace atsp
