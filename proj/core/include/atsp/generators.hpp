#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "atsp/graph.hpp"

namespace atsp {

enum class GenModel { kCycle, kRandomStrong, kTwoCluster, kUnitDigraph };

// "cycle", "random-strong", "two-cluster", "unit-digraph"; InputError otherwise.
GenModel parse_model(std::string_view name);
std::string model_name(GenModel model);
const std::vector<GenModel>& all_models();

// Deterministic in (model, n, seed) on every platform.
//   cycle          unit-cost directed Hamiltonian cycle
//   random-strong  random Hamiltonian cycle plus random arcs, costs 1..100
//   two-cluster    two unit cycles joined at their first vertices by cost-5
//                  arcs; seed 0 is exactly that, other seeds add chords and
//                  vary the joining costs
//   unit-digraph   random in- and out-trees at vertex 0 plus sparse arcs,
//                  all costs 1
Digraph gen_instance(GenModel model, int n, std::uint64_t seed);

}  // namespace atsp
