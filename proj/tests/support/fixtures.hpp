#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atsp/generators.hpp"
#include "atsp/graph.hpp"
#include "atsp/svensson.hpp"
#include "atsp/subtour_cover.hpp"
#include "atsp/vertebrate.hpp"

namespace fixture {

using namespace atsp;

Digraph c3();
Digraph k2();
// Two unit triangles {0,1,2} and {3,4,5} joined by 0->3 and 3->0 of cost 5.
Digraph two_tri();

struct GenCase {
  GenModel model;
  int n;
  std::uint64_t seed;
  std::string label() const;
};

// The 100 generated instances: models in rotation, n from 2 to 15.
std::vector<GenCase> generated_cases();

// Vertebrate pair whose family has only singletons, V(B) = {0} and an empty
// backbone; x is the average of a few random Hamiltonian cycles. These reach
// the free-component and better-initialization paths that real LP instances
// rarely hit.
VertebratePair singleton_pair(std::uint64_t seed);

// Everything the solver saw while solving g with the default algorithm.
struct Recording {
  std::vector<VertebratePair> pairs;
  std::vector<SubtourCoverInstance> covers;
  std::vector<SvenssonTrace> traces;
  std::vector<EdgeMultiset> solutions;  // per pair
};

VertebrateAlgorithm recording_algorithm(Recording& rec, const Rational& epsilon = 1);
SvenssonParams recording_params(Recording& rec);

// Records solve_atsp on g.
Recording record_pipeline(const Digraph& g);
// Records vertebrate_solve on a singleton pair.
Recording record_singleton(std::uint64_t seed);

// At least `count` cover instances from singleton pairs and generated graphs,
// in a fixed order.
std::vector<SubtourCoverInstance> cover_instances(std::size_t count);

}  // namespace fixture
