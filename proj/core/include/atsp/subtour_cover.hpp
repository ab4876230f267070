#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "atsp/graph.hpp"
#include "atsp/rational.hpp"
#include "atsp/vertebrate.hpp"

namespace atsp {

struct SubtourCoverInstance {
  VertebratePair pair;
  EdgeMultiset H;
};

// H Eulerian, inside E[V \ V(B)] and crossing no member of size >= 2.
void validate_subtour_cover_instance(const SubtourCoverInstance& inst);

// Vertex sets of the components of (V \ V(B), H), ordered by smallest vertex.
std::vector<VertexSet> cover_components(const SubtourCoverInstance& inst);

enum class EdgeClass : std::uint8_t { kForward, kBackward, kNeutral };

struct LevelStructure {
  // levels[0] is V, then the members of size >= 2 by non-increasing size,
  // ties by contents.
  std::vector<VertexSet> levels;
  std::vector<int> r;                // per vertex: deepest level containing it
  std::vector<EdgeClass> edge_class; // per instance edge
};

LevelStructure build_level_structure(const VertebratePair& pair);

struct WitnessFlow {
  std::vector<Rational> f;       // per instance edge
  Rational boundary_value;       // sum_i f(delta(W_i)), minimized in stage one
  Rational total;                // sum_e f(e), minimized in stage two
};

// Checks conditions (a)-(d) of a witness flow for x.
bool is_witness_flow(const VertebratePair& pair, const LevelStructure& levels, const std::vector<Rational>& f);
Rational boundary_value(const Digraph& g, const std::vector<VertexSet>& W, const std::vector<Rational>& f);

// Two-stage exact LP: first minimize the boundary mass over the cover
// components, then the total flow below that solution.
WitnessFlow compute_witness_flow(const SubtourCoverInstance& inst, const LevelStructure& levels);

// G plus one auxiliary vertex a_i per cover component. Every edge of G with an
// endpoint in some W^_i gets copies with that endpoint moved to a_i (both
// endpoints for edges between two such sets). Edges [0, m) are G itself.
struct AugmentedGraph {
  Digraph graph;
  int base_vertices = 0;
  int base_edges = 0;
  int k = 0;
  std::vector<EdgeId> origin;          // edge -> instance edge
  std::vector<EdgeClass> edge_class;   // per edge
  std::vector<VertexSet> W;            // cover components
  std::vector<VertexSet> W_hat;        // first residual SCC of each
  std::vector<int> hat_of;             // instance vertex -> i or -1
  // copy[e][tail moved][head moved] -> edge id or -1
  std::vector<std::array<std::array<EdgeId, 2>, 2>> copy;
  VertexId aux(int i) const { return base_vertices + i; }
};

AugmentedGraph build_augmented_graph(const SubtourCoverInstance& inst, const LevelStructure& levels,
                                     const WitnessFlow& f);

// Split graph of the augmented graph: vertex 2v + level. Lower copies of
// forward and neutral edges, upper copies of backward and neutral edges, a
// down edge at every vertex and an up edge at every backbone vertex.
struct SplitGraph {
  Digraph graph;
  std::vector<EdgeId> lower;   // per augmented edge, -1 if absent
  std::vector<EdgeId> upper;
  std::vector<EdgeId> down;    // per augmented vertex
  std::vector<EdgeId> up;      // per augmented vertex, -1 off the backbone
  std::vector<EdgeId> base;    // split edge -> augmented edge or -1
  std::vector<int> level;      // split edge -> 0 or 1 for copies, -1 otherwise
  static VertexId node(VertexId v, int level) { return 2 * v + level; }
};

SplitGraph build_split_graph(const AugmentedGraph& aug, const VertexSet& backbone_vertices);

struct SplitCirculation {
  SplitGraph split;
  std::vector<Rational> z;       // lifted (x, f) before rerouting
  std::vector<Rational> z_bar;   // after rerouting through the auxiliary vertices
  std::vector<int> q;            // per i: level receiving the rerouted half unit
};

// Lifts (x, f) into the split graph and reroutes half a unit through each a_i.
SplitCirculation lift_and_reroute(const SubtourCoverInstance& inst, const WitnessFlow& f, const AugmentedGraph& aug);

struct RoundedCover {
  std::vector<Rational> z_star;  // integral circulation on the split graph
  EdgeMultiset F_bar;            // image on the augmented graph
  std::vector<std::int64_t> f_star;  // lower-level part per augmented edge
};

RoundedCover round_circulation(const SubtourCoverInstance& inst, const AugmentedGraph& aug,
                               const SplitCirculation& circ);

// Replaces auxiliary edges by their originals and closes each W_i with a
// fewest-edges path inside G[W_i].
EdgeMultiset map_back(const SubtourCoverInstance& inst, const AugmentedGraph& aug, const RoundedCover& rounded);

struct SubtourCoverStats {
  int components = 0;
  int split_vertices = 0;
  int split_edges = 0;
  Rational witness_boundary;
  Rational cost;
};

EdgeMultiset subtour_cover(const SubtourCoverInstance& inst, SubtourCoverStats* stats = nullptr);

// Checks conditions (i)-(iii) of a cover solution and both cost bounds.
void check_subtour_cover_solution(const SubtourCoverInstance& inst, const EdgeMultiset& F);

}  // namespace atsp
