#include "atsp/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "atsp/errors.hpp"

namespace atsp {

Digraph::Digraph(int n) : n_(n), out_(n), in_(n) {
  if (n < 0) throw InputError("negative vertex count");
}

EdgeId Digraph::add_edge(VertexId tail, VertexId head, Rational cost) {
  if (tail < 0 || tail >= n_ || head < 0 || head >= n_) {
    throw InputError("edge endpoint out of range: (" + std::to_string(tail) + "," +
                     std::to_string(head) + ")");
  }
  if (tail == head) throw InputError("self-loop at vertex " + std::to_string(tail));
  if (cost < 0) throw InputError("negative edge cost " + cost.get_str());
  EdgeId id = num_edges();
  edges_.push_back(Edge{tail, head, std::move(cost)});
  out_[tail].push_back(id);
  in_[head].push_back(id);
  return id;
}

void EdgeMultiset::add(EdgeId e, std::int64_t k) {
  if (e < 0 || e >= universe()) throw InputError("unknown edge id " + std::to_string(e));
  count_[e] += k;
  if (count_[e] < 0) throw ContractViolation("negative multiplicity on edge " + std::to_string(e));
}

void EdgeMultiset::remove(EdgeId e, std::int64_t k) { add(e, -k); }

void EdgeMultiset::add_all(const EdgeMultiset& other) {
  if (other.universe() != universe()) throw ContractViolation("multiset universe mismatch");
  for (EdgeId e = 0; e < universe(); ++e) count_[e] += other.count_[e];
}

std::int64_t EdgeMultiset::total() const {
  return std::accumulate(count_.begin(), count_.end(), std::int64_t{0});
}

std::vector<EdgeId> EdgeMultiset::support() const {
  std::vector<EdgeId> s;
  for (EdgeId e = 0; e < universe(); ++e) {
    if (count_[e] > 0) s.push_back(e);
  }
  return s;
}

Rational EdgeMultiset::cost(const Digraph& g) const {
  Rational c = 0;
  for (EdgeId e = 0; e < universe(); ++e) {
    if (count_[e] > 0) c += g.edge(e).cost * static_cast<long>(count_[e]);
  }
  return c;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

void require_universe(const Digraph& g, const EdgeMultiset& F) {
  if (F.universe() != g.num_edges()) {
    throw InputError("edge multiset does not match graph (" + std::to_string(F.universe()) +
                     " vs " + std::to_string(g.num_edges()) + " edges)");
  }
}

}  // namespace

std::vector<int> component_labels(const Digraph& g, const EdgeMultiset& F) {
  require_universe(g, F);
  UnionFind uf(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (F.count(e) > 0) uf.unite(g.edge(e).tail, g.edge(e).head);
  }
  std::vector<int> label(g.num_vertices(), -1);
  std::vector<int> root_label(g.num_vertices(), -1);
  int next = 0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    int r = uf.find(v);
    if (root_label[r] < 0) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

std::vector<VertexSet> components_from_labels(const std::vector<int>& label) {
  int k = 0;
  for (int l : label) k = std::max(k, l + 1);
  std::vector<VertexSet> comps(k);
  for (VertexId v = 0; v < static_cast<int>(label.size()); ++v) comps[label[v]].push_back(v);
  return comps;
}

EulerianCheck is_eulerian_connected(const Digraph& g, const EdgeMultiset& F) {
  require_universe(g, F);
  std::vector<std::int64_t> balance(g.num_vertices(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (F.count(e) == 0) continue;
    balance[g.edge(e).tail] -= F.count(e);
    balance[g.edge(e).head] += F.count(e);
  }
  EulerianCheck out;
  out.eulerian = std::all_of(balance.begin(), balance.end(), [](auto b) { return b == 0; });
  out.components = components_from_labels(component_labels(g, F));
  return out;
}

std::vector<EdgeId> euler_walk(const Digraph& g, const EdgeMultiset& F, VertexId start) {
  require_universe(g, F);
  EulerianCheck chk = is_eulerian_connected(g, F);
  if (!chk.eulerian) throw ContractViolation("euler_walk: multiset is not Eulerian");
  int nontrivial = 0;
  for (const auto& c : chk.components) {
    bool has_edge = false;
    for (VertexId v : c) {
      for (EdgeId e : g.out_edges(v)) has_edge = has_edge || F.count(e) > 0;
    }
    nontrivial += has_edge ? 1 : 0;
  }
  if (nontrivial > 1) throw ContractViolation("euler_walk: support is disconnected");
  if (F.total() == 0) return {};
  bool start_ok = false;
  for (EdgeId e : g.out_edges(start)) start_ok = start_ok || F.count(e) > 0;
  if (!start_ok) throw ContractViolation("euler_walk: start vertex has no edge");

  std::vector<std::int64_t> left = F.counts();
  std::vector<std::size_t> cursor(g.num_vertices(), 0);
  // Stack of (vertex, edge used to arrive); Hierholzer with explicit stack.
  std::vector<std::pair<VertexId, EdgeId>> stack{{start, -1}};
  std::vector<EdgeId> reversed;
  while (!stack.empty()) {
    VertexId v = stack.back().first;
    const auto& outs = g.out_edges(v);
    while (cursor[v] < outs.size() && left[outs[cursor[v]]] == 0) ++cursor[v];
    if (cursor[v] < outs.size()) {
      EdgeId e = outs[cursor[v]];
      --left[e];
      stack.emplace_back(g.edge(e).head, e);
    } else {
      if (stack.back().second >= 0) reversed.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  std::reverse(reversed.begin(), reversed.end());
  return reversed;
}

std::vector<VertexId> walk_vertices(const Digraph& g, const std::vector<EdgeId>& walk) {
  std::vector<VertexId> seq;
  if (walk.empty()) return seq;
  seq.push_back(g.edge(walk.front()).tail);
  for (EdgeId e : walk) seq.push_back(g.edge(e).head);
  return seq;
}

std::vector<VertexSet> scc_topological(const Digraph& g, const VertexSet& restrict) {
  const int n = g.num_vertices();
  std::vector<char> in(n, 0);
  for (VertexId v : restrict) {
    if (v < 0 || v >= n) throw InputError("scc_topological: vertex out of range");
    in[v] = 1;
  }
  // Iterative Tarjan. Tarjan emits SCCs in reverse topological order.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<VertexSet> sccs;
  int counter = 0;
  struct Frame {
    VertexId v;
    std::size_t next;
  };
  for (VertexId root : restrict) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& outs = g.out_edges(f.v);
      if (f.next < outs.size()) {
        VertexId w = g.edge(outs[f.next++]).head;
        if (!in[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        VertexId v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          VertexSet comp;
          VertexId w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
          } while (w != v);
          std::sort(comp.begin(), comp.end());
          sccs.push_back(std::move(comp));
        }
      }
    }
  }
  std::reverse(sccs.begin(), sccs.end());
  return sccs;
}

std::vector<VertexSet> scc_topological(const Digraph& g) {
  VertexSet all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  return scc_topological(g, all);
}

bool is_strongly_connected(const Digraph& g, const VertexSet& restrict) {
  return scc_topological(g, restrict).size() <= 1;
}

bool is_strongly_connected(const Digraph& g) { return scc_topological(g).size() <= 1; }

std::pair<Digraph, ContractionMap> contract(const Digraph& g, const std::vector<VertexSet>& classes) {
  const int n = g.num_vertices();
  std::vector<int> cls(n, -1);
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
    for (VertexId v : classes[c]) {
      if (v < 0 || v >= n) throw InputError("contract: vertex out of range");
      if (cls[v] >= 0) throw InputError("contract: classes overlap at vertex " + std::to_string(v));
      cls[v] = c;
    }
  }
  ContractionMap map;
  map.vertex_image.assign(n, -1);
  int next = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (cls[v] < 0) map.vertex_image[v] = next++;
  }
  std::vector<int> class_vertex(classes.size(), -1);
  for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
    if (classes[c].empty()) continue;
    class_vertex[c] = next++;
  }
  for (VertexId v = 0; v < n; ++v) {
    if (cls[v] >= 0) map.vertex_image[v] = class_vertex[cls[v]];
  }
  Digraph out(next);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    VertexId a = map.vertex_image[ed.tail];
    VertexId b = map.vertex_image[ed.head];
    if (a == b) continue;
    out.add_edge(a, b, ed.cost);
    map.edge_origin.push_back(e);
  }
  return {std::move(out), std::move(map)};
}

bool check_laminar(const std::vector<VertexSet>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const auto& a = sets[i];
      const auto& b = sets[j];
      if (!intersects(a, b)) continue;
      if (is_subset(a, b) || is_subset(b, a)) continue;
      return false;
    }
  }
  return true;
}

std::optional<std::vector<EdgeId>> bfs_path(const Digraph& g, VertexId s, VertexId t,
                                            const std::vector<char>& allowed) {
  if (s == t) return std::vector<EdgeId>{};
  std::vector<EdgeId> via(g.num_vertices(), -1);
  std::vector<char> seen(g.num_vertices(), 0);
  std::deque<VertexId> queue{s};
  seen[s] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.out_edges(v)) {
      VertexId w = g.edge(e).head;
      if (seen[w] || !allowed[w]) continue;
      seen[w] = 1;
      via[w] = e;
      if (w == t) {
        std::vector<EdgeId> path;
        for (VertexId x = t; x != s; x = g.edge(via[x]).tail) path.push_back(via[x]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

VertexSet make_vertex_set(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<char> membership_mask(int n, const VertexSet& s) {
  std::vector<char> m(n, 0);
  for (VertexId v : s) m[v] = 1;
  return m;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

VertexSet complement(int n, const VertexSet& s) {
  VertexSet r;
  std::size_t j = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (j < s.size() && s[j] == v) {
      ++j;
    } else {
      r.push_back(v);
    }
  }
  return r;
}

}  // namespace atsp
