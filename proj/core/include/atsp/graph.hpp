#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "atsp/rational.hpp"

namespace atsp {

using VertexId = int;
using EdgeId = int;

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;

struct Edge {
  VertexId tail;
  VertexId head;
  Rational cost;
};

class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n);

  // Throws InputError on self-loops, negative costs or unknown vertices.
  EdgeId add_edge(VertexId tail, VertexId head, Rational cost);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
};

class EdgeMultiset {
 public:
  EdgeMultiset() = default;
  explicit EdgeMultiset(int num_edges) : count_(num_edges, 0) {}

  int universe() const { return static_cast<int>(count_.size()); }
  std::int64_t count(EdgeId e) const { return count_[e]; }
  void add(EdgeId e, std::int64_t k = 1);
  void remove(EdgeId e, std::int64_t k = 1);
  void add_all(const EdgeMultiset& other);
  std::int64_t total() const;
  bool empty() const { return total() == 0; }
  std::vector<EdgeId> support() const;
  Rational cost(const Digraph& g) const;
  const std::vector<std::int64_t>& counts() const { return count_; }

  friend bool operator==(const EdgeMultiset&, const EdgeMultiset&) = default;

 private:
  std::vector<std::int64_t> count_;
};

struct EulerianCheck {
  bool eulerian = false;
  std::vector<VertexSet> components;  // sorted by smallest vertex
  bool connected() const { return components.size() <= 1; }
};

// Component labels of the undirected support of F; isolated vertices are
// their own components. Labels are numbered by smallest vertex.
std::vector<int> component_labels(const Digraph& g, const EdgeMultiset& F);
std::vector<VertexSet> components_from_labels(const std::vector<int>& label);

EulerianCheck is_eulerian_connected(const Digraph& g, const EdgeMultiset& F);

// Hierholzer walk; returned as an edge sequence starting and ending at start.
std::vector<EdgeId> euler_walk(const Digraph& g, const EdgeMultiset& F, VertexId start);

// Vertex sequence of a closed edge walk (first vertex repeated at the end).
std::vector<VertexId> walk_vertices(const Digraph& g, const std::vector<EdgeId>& walk);

// SCCs of g[restrict] in topological order of the condensation.
std::vector<VertexSet> scc_topological(const Digraph& g, const VertexSet& restrict);
std::vector<VertexSet> scc_topological(const Digraph& g);
bool is_strongly_connected(const Digraph& g, const VertexSet& restrict);
bool is_strongly_connected(const Digraph& g);

struct ContractionMap {
  std::vector<VertexId> vertex_image;  // parent vertex -> contracted vertex
  std::vector<EdgeId> edge_origin;     // contracted edge -> parent edge
};

// Each class becomes one vertex numbered after the untouched vertices, in
// class order. Untouched vertices keep their relative order.
std::pair<Digraph, ContractionMap> contract(const Digraph& g, const std::vector<VertexSet>& classes);

bool check_laminar(const std::vector<VertexSet>& sets);

// Fewest-edges path from s to t using only vertices with allowed[v] set.
// Empty vector when s == t; nullopt when unreachable.
std::optional<std::vector<EdgeId>> bfs_path(const Digraph& g, VertexId s, VertexId t,
                                            const std::vector<char>& allowed);

VertexSet make_vertex_set(std::vector<VertexId> v);
std::vector<char> membership_mask(int n, const VertexSet& s);
bool is_subset(const VertexSet& a, const VertexSet& b);
bool intersects(const VertexSet& a, const VertexSet& b);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet complement(int n, const VertexSet& s);

}  // namespace atsp
