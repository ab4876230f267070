#include "atsp/instance.hpp"

#include <numeric>
#include <string>

#include "atsp/check.hpp"
#include "atsp/errors.hpp"
#include "atsp/flow.hpp"

namespace atsp {

StronglyLaminarInstance::StronglyLaminarInstance(const Digraph& g, LaminarFamily family, std::vector<Rational> x)
    : g_(g.num_vertices()), family_(std::move(family)), x_(std::move(x)) {
  if (family_.ground_size() != g.num_vertices()) {
    if (family_.size() != 0) throw ContractViolation("instance: family ground set does not match graph");
    family_ = LaminarFamily(g.num_vertices(), {}, {});
  }
  if (static_cast<int>(x_.size()) != g.num_edges()) throw ContractViolation("instance: x size mismatch");
  for (const Edge& e : g.edges()) g_.add_edge(e.tail, e.head, family_.crossing_weight(e.tail, e.head));
}

Rational StronglyLaminarInstance::lp_value() const {
  Rational v = 0;
  for (EdgeId e = 0; e < g_.num_edges(); ++e) v += g_.edge(e).cost * x_[e];
  return v;
}

Rational cut_value(const Digraph& g, const std::vector<Rational>& x, const std::vector<char>& in_set) {
  Rational total = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (in_set[g.edge(e).tail] != in_set[g.edge(e).head]) total += x[e];
  }
  return total;
}

Rational min_cut_value(const Digraph& g, const std::vector<Rational>& x, VertexId s, VertexId t) {
  MaxFlow mf(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) mf.add_arc(g.edge(e).tail, g.edge(e).head, x[e]);
  return mf.run(s, t);
}

void validate_strongly_laminar(const StronglyLaminarInstance& inst) {
  const Digraph& g = inst.graph();
  const LaminarFamily& fam = inst.family();
  const int n = g.num_vertices();
  ATSP_CHECK("instance", is_strongly_connected(g), "graph is not strongly connected");
  for (int i = 0; i < fam.size(); ++i) {
    ATSP_CHECK("instance", is_strongly_connected(g, fam.set(i)),
               "member " + std::to_string(i) + " does not induce a strongly connected subgraph");
    ATSP_CHECK("instance", sgn(fam.weight(i)) > 0, "nonpositive member weight");
  }
  std::vector<Rational> balance(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    ATSP_CHECK("instance", sgn(inst.x(e)) > 0, "x is not positive on edge " + std::to_string(e));
    balance[g.edge(e).tail] -= inst.x(e);
    balance[g.edge(e).head] += inst.x(e);
    ATSP_CHECK("instance", g.edge(e).cost == fam.crossing_weight(g.edge(e).tail, g.edge(e).head),
               "induced cost mismatch on edge " + std::to_string(e));
  }
  for (VertexId v = 0; v < n; ++v) {
    ATSP_CHECK("instance", sgn(balance[v]) == 0, "x violates flow conservation at " + std::to_string(v));
  }
  for (int i = 0; i < fam.size(); ++i) {
    ATSP_CHECK("instance", cut_value(g, inst.x(), membership_mask(n, fam.set(i))) == 2,
               "member " + std::to_string(i) + " is not tight");
  }
  // Every cut carries x-mass 2 iff every vertex sends and receives one unit
  // of flow to and from vertex 0.
  if (n >= 2 && bound_checks_enabled()) {
    for (VertexId t = 1; t < n; ++t) {
      ATSP_BOUND("instance", min_cut_value(g, inst.x(), 0, t) >= 1, "x violates a cut constraint");
      ATSP_BOUND("instance", min_cut_value(g, inst.x(), t, 0) >= 1, "x violates a cut constraint");
    }
  }
  Rational two_y = 2 * fam.total_weight();
  ATSP_CHECK("instance", inst.lp_value() == two_y, "c(x) differs from the sum of 2y_L");
}

int visit_runs(const StronglyLaminarInstance& inst, const std::vector<EdgeId>& path, VertexId start, int i) {
  const Digraph& g = inst.graph();
  const LaminarFamily& fam = inst.family();
  int runs = fam.contains(i, start) ? 1 : 0;
  bool inside = fam.contains(i, start);
  for (EdgeId e : path) {
    bool now = fam.contains(i, g.edge(e).head);
    if (now && !inside) ++runs;
    inside = now;
  }
  return runs;
}

std::vector<EdgeId> nice_path(const StronglyLaminarInstance& inst, VertexId v, VertexId w) {
  const Digraph& g = inst.graph();
  const LaminarFamily& fam = inst.family();
  const int n = g.num_vertices();
  if (v == w) return {};
  const int outer = fam.minimal_common(v, w);
  std::vector<char> allowed = outer == kWholeSet ? std::vector<char>(n, 1) : membership_mask(n, fam.set(outer));
  auto initial = bfs_path(g, v, w, allowed);
  ATSP_CHECK("nice-path", initial.has_value(), "no path inside the minimal common member");
  std::vector<EdgeId> path = std::move(*initial);

  for (int iter = 0; iter <= fam.size(); ++iter) {
    // Members are sorted by size, so the first violated one is maximal.
    int bad = -1;
    for (int i = 0; i < fam.size() && bad < 0; ++i) {
      if (visit_runs(inst, path, v, i) > 1) bad = i;
    }
    if (bad < 0) return path;
    std::vector<VertexId> seq{v};
    for (EdgeId e : path) seq.push_back(g.edge(e).head);
    int first = -1, last = -1;
    for (int k = 0; k < static_cast<int>(seq.size()); ++k) {
      if (fam.contains(bad, seq[k])) {
        if (first < 0) first = k;
        last = k;
      }
    }
    auto inner = bfs_path(g, seq[first], seq[last], membership_mask(n, fam.set(bad)));
    ATSP_CHECK("nice-path", inner.has_value(), "member does not induce a strongly connected subgraph");
    std::vector<EdgeId> repaired(path.begin(), path.begin() + first);
    repaired.insert(repaired.end(), inner->begin(), inner->end());
    repaired.insert(repaired.end(), path.begin() + last, path.end());
    path = std::move(repaired);
  }
  ATSP_CHECK("nice-path", false, "repair loop did not converge");
  return path;
}

NicePathTable::NicePathTable(const StronglyLaminarInstance& inst) : n_(inst.num_vertices()) {
  paths_.resize(static_cast<std::size_t>(n_) * n_);
  costs_.resize(paths_.size());
  for (VertexId u = 0; u < n_; ++u) {
    for (VertexId v = 0; v < n_; ++v) {
      if (u == v) continue;
      auto& p = paths_[u * n_ + v];
      p = nice_path(inst, u, v);
      for (EdgeId e : p) costs_[u * n_ + v] += inst.cost(e);
    }
  }
}

VertexSet members_of(const StronglyLaminarInstance& inst, int W) {
  if (W != kWholeSet) return inst.family().set(W);
  VertexSet all(inst.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

Rational family_value(const StronglyLaminarInstance& inst, int W) {
  const LaminarFamily& fam = inst.family();
  Rational total = 0;
  for (int i = 0; i < fam.size(); ++i) {
    if (i != W && fam.nested_in(i, W)) total += 2 * fam.weight(i);
  }
  return total;
}

Rational inner_weight(const StronglyLaminarInstance& inst, int W, VertexId v) {
  const LaminarFamily& fam = inst.family();
  Rational total = 0;
  for (int i : fam.chain(v)) {
    if (i != W && fam.nested_in(i, W)) total += fam.weight(i);
  }
  return total;
}

Rational nice_path_cost_identity(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W,
                                 VertexId u, VertexId v) {
  const LaminarFamily& fam = inst.family();
  const Digraph& g = inst.graph();
  ATSP_CHECK("nice-path", fam.contains(W, u) && fam.contains(W, v), "endpoints outside W");
  const auto& p = paths.path(u, v);
  std::vector<char> touched(fam.size(), 0);
  for (int i : fam.chain(u)) touched[i] = 1;
  for (EdgeId e : p) {
    for (int i : fam.chain(g.edge(e).head)) touched[i] = 1;
  }
  Rational rhs = 0;
  for (int i = 0; i < fam.size(); ++i) {
    if (touched[i] && i != W && fam.nested_in(i, W)) rhs += 2 * fam.weight(i);
  }
  rhs -= inner_weight(inst, W, u);
  rhs -= inner_weight(inst, W, v);
  const Rational& cost = paths.path_cost(u, v);
  ATSP_CHECK("nice-path", cost == rhs,
             "path cost identity fails for (" + std::to_string(u) + "," + std::to_string(v) + ")");
  return cost;
}

ValueAndDw value_and_dw(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W) {
  ValueAndDw out;
  out.value = family_value(inst, W);
  VertexSet members = members_of(inst, W);
  std::vector<Rational> inner(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) inner[k] = inner_weight(inst, W, members[k]);
  bool first = true;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = 0; b < members.size(); ++b) {
      Rational d = inner[a] + inner[b] + paths.path_cost(members[a], members[b]);
      ATSP_BOUND("value-dw", d <= out.value, "D_W(u,v) exceeds value(W)");
      // On ties prefer distinct endpoints: same D_W, longer backbone.
      if (first || d > out.dw || (d == out.dw && out.u == out.v && a != b)) {
        out.dw = d;
        out.u = members[a];
        out.v = members[b];
        first = false;
      }
    }
  }
  return out;
}

}  // namespace atsp
