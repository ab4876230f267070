#include "atsp/subtour_cover.hpp"

#include <algorithm>
#include <string>

#include "atsp/check.hpp"
#include "atsp/errors.hpp"
#include "atsp/flow.hpp"
#include "atsp/simplex.hpp"

namespace atsp {

namespace {

bool crosses_big_member(const LaminarFamily& fam, VertexId t, VertexId h) {
  for (int i = 0; i < fam.size(); ++i) {
    if (fam.set(i).size() >= 2 && fam.crosses(i, t, h)) return true;
  }
  return false;
}

bool is_acyclic(int n, const std::vector<std::pair<VertexId, VertexId>>& arcs) {
  Digraph d(n);
  for (auto [a, b] : arcs) d.add_edge(a, b, 0);
  return static_cast<int>(scc_topological(d).size()) == n;
}

bool is_circulation(const Digraph& g, const std::vector<Rational>& z) {
  std::vector<Rational> bal(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (sgn(z[e]) < 0) return false;
    bal[g.edge(e).tail] -= z[e];
    bal[g.edge(e).head] += z[e];
  }
  for (const auto& b : bal) {
    if (sgn(b) != 0) return false;
  }
  return true;
}

Rational split_cost(const Digraph& g, const std::vector<Rational>& z) {
  Rational c = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) c += g.edge(e).cost * z[e];
  return c;
}

}  // namespace

void validate_subtour_cover_instance(const SubtourCoverInstance& inst) {
  validate_vertebrate_pair(inst.pair);
  const Digraph& g = inst.pair.instance.graph();
  const LaminarFamily& fam = inst.pair.instance.family();
  ATSP_CHECK("cover-instance", inst.H.universe() == g.num_edges(), "H over the wrong graph");
  ATSP_CHECK("cover-instance", is_eulerian_connected(g, inst.H).eulerian, "H is not Eulerian");
  auto on_b = membership_mask(g.num_vertices(), inst.pair.backbone_vertices);
  for (EdgeId e : inst.H.support()) {
    const Edge& ed = g.edge(e);
    ATSP_CHECK("cover-instance", !on_b[ed.tail] && !on_b[ed.head], "H touches the backbone");
    ATSP_CHECK("cover-instance", !crosses_big_member(fam, ed.tail, ed.head), "H crosses a member");
  }
}

std::vector<VertexSet> cover_components(const SubtourCoverInstance& inst) {
  const Digraph& g = inst.pair.instance.graph();
  auto label = component_labels(g, inst.H);
  auto on_b = membership_mask(g.num_vertices(), inst.pair.backbone_vertices);
  std::vector<VertexSet> by_label(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!on_b[v]) by_label[label[v]].push_back(v);
  }
  std::vector<VertexSet> out;
  for (auto& s : by_label) {
    if (!s.empty()) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

LevelStructure build_level_structure(const VertebratePair& pair) {
  const StronglyLaminarInstance& I = pair.instance;
  const LaminarFamily& fam = I.family();
  const int n = I.num_vertices();
  LevelStructure ls;
  ls.levels.push_back(members_of(I, kWholeSet));
  for (int i = 0; i < fam.size(); ++i) {
    if (fam.set(i).size() >= 2) ls.levels.push_back(fam.set(i));
  }
  ls.r.assign(n, 0);
  for (int j = 0; j < static_cast<int>(ls.levels.size()); ++j) {
    for (VertexId v : ls.levels[j]) ls.r[v] = j;
  }
  for (const Edge& e : I.graph().edges()) {
    int a = ls.r[e.tail], b = ls.r[e.head];
    ls.edge_class.push_back(a < b ? EdgeClass::kForward : a > b ? EdgeClass::kBackward : EdgeClass::kNeutral);
  }
  return ls;
}

bool is_witness_flow(const VertebratePair& pair, const LevelStructure& levels, const std::vector<Rational>& f) {
  const StronglyLaminarInstance& I = pair.instance;
  const Digraph& g = I.graph();
  if (static_cast<int>(f.size()) != g.num_edges()) return false;
  std::vector<Rational> net(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    switch (levels.edge_class[e]) {
      case EdgeClass::kBackward:
        if (sgn(f[e]) != 0) return false;
        break;
      case EdgeClass::kForward:
        if (f[e] != I.x(e)) return false;
        break;
      case EdgeClass::kNeutral:
        if (sgn(f[e]) < 0 || f[e] > I.x(e)) return false;
        break;
    }
    net[g.edge(e).tail] += f[e];
    net[g.edge(e).head] -= f[e];
  }
  auto on_b = membership_mask(g.num_vertices(), pair.backbone_vertices);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!on_b[v] && sgn(net[v]) < 0) return false;
  }
  return true;
}

Rational boundary_value(const Digraph& g, const std::vector<VertexSet>& W, const std::vector<Rational>& f) {
  std::vector<int> comp(g.num_vertices(), -1);
  for (int i = 0; i < static_cast<int>(W.size()); ++i) {
    for (VertexId v : W[i]) comp[v] = i;
  }
  Rational total = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    int a = comp[g.edge(e).tail], b = comp[g.edge(e).head];
    if (a == b) continue;
    int times = (a >= 0 ? 1 : 0) + (b >= 0 ? 1 : 0);
    total += times * f[e];
  }
  return total;
}

WitnessFlow compute_witness_flow(const SubtourCoverInstance& inst, const LevelStructure& levels) {
  const VertebratePair& pair = inst.pair;
  const StronglyLaminarInstance& I = pair.instance;
  const Digraph& g = I.graph();
  const int n = g.num_vertices();
  const int m = g.num_edges();
  std::vector<VertexSet> W = cover_components(inst);
  std::vector<int> comp(n, -1);
  for (int i = 0; i < static_cast<int>(W.size()); ++i) {
    for (VertexId v : W[i]) comp[v] = i;
  }
  auto on_b = membership_mask(n, pair.backbone_vertices);

  std::vector<int> col(m, -1);
  std::vector<EdgeId> neutral;
  WitnessFlow out;
  out.f.assign(m, Rational(0));
  for (EdgeId e = 0; e < m; ++e) {
    if (levels.edge_class[e] == EdgeClass::kNeutral) {
      col[e] = static_cast<int>(neutral.size());
      neutral.push_back(e);
    } else if (levels.edge_class[e] == EdgeClass::kForward) {
      out.f[e] = I.x(e);
    }
  }
  // Demand of constraint (d) after moving the fixed forward flow to the right.
  std::vector<Rational> need(n);
  for (EdgeId e = 0; e < m; ++e) {
    if (levels.edge_class[e] != EdgeClass::kForward) continue;
    need[g.edge(e).head] += I.x(e);
    need[g.edge(e).tail] -= I.x(e);
  }

  auto solve_stage = [&](const std::vector<Rational>& cost, const std::vector<Rational>& cap) {
    ExactSimplex lp(cost);
    for (std::size_t k = 0; k < neutral.size(); ++k) {
      lp.add_row({{static_cast<int>(k), Rational(1)}}, RowSense::kLessEqual, cap[k]);
    }
    for (VertexId v = 0; v < n; ++v) {
      if (on_b[v]) continue;
      std::vector<LpTerm> terms;
      for (EdgeId e : g.out_edges(v)) {
        if (col[e] >= 0) terms.push_back({col[e], Rational(1)});
      }
      for (EdgeId e : g.in_edges(v)) {
        if (col[e] >= 0) terms.push_back({col[e], Rational(-1)});
      }
      if (terms.empty()) {
        ATSP_CHECK("witness", sgn(need[v]) <= 0, "no witness flow exists");
        continue;
      }
      lp.add_row(terms, RowSense::kGreaterEqual, need[v]);
    }
    LpStatus st = lp.solve();
    ATSP_CHECK("witness", st == LpStatus::kOptimal, "witness flow LP is not solvable");
    return lp.primal();
  };

  std::vector<Rational> caps;
  std::vector<Rational> cross;
  for (EdgeId e : neutral) {
    caps.push_back(I.x(e));
    int a = comp[g.edge(e).tail], b = comp[g.edge(e).head];
    cross.push_back(Rational(a == b ? 0 : (a >= 0 ? 1 : 0) + (b >= 0 ? 1 : 0)));
  }
  std::vector<Rational> first;
  if (!neutral.empty()) first = solve_stage(cross, caps);
  std::vector<Rational> f_tilde = out.f;
  for (std::size_t k = 0; k < neutral.size(); ++k) f_tilde[neutral[k]] = first[k];
  ATSP_CHECK("witness", is_witness_flow(pair, levels, f_tilde), "stage one result is not a witness flow");
  const Rational stage_one = boundary_value(g, W, f_tilde);

  std::vector<Rational> second;
  if (!neutral.empty()) second = solve_stage(std::vector<Rational>(neutral.size(), Rational(1)), first);
  for (std::size_t k = 0; k < neutral.size(); ++k) out.f[neutral[k]] = second[k];

  ATSP_CHECK("witness", is_witness_flow(pair, levels, out.f), "stage two result is not a witness flow");
  out.boundary_value = boundary_value(g, W, out.f);
  ATSP_CHECK("witness", out.boundary_value == stage_one, "stage two lost boundary minimality");
  std::vector<std::pair<VertexId, VertexId>> arcs;
  for (EdgeId e = 0; e < m; ++e) {
    if (sgn(out.f[e]) > 0) arcs.emplace_back(g.edge(e).tail, g.edge(e).head);
    out.total += out.f[e];
  }
  ATSP_CHECK("witness", is_acyclic(n, arcs), "witness flow support has a cycle");
  return out;
}

AugmentedGraph build_augmented_graph(const SubtourCoverInstance& inst, const LevelStructure& levels,
                                     const WitnessFlow& f) {
  const StronglyLaminarInstance& I = inst.pair.instance;
  const Digraph& g = I.graph();
  const int n = g.num_vertices();
  const int m = g.num_edges();
  AugmentedGraph aug;
  aug.base_vertices = n;
  aug.base_edges = m;
  aug.W = cover_components(inst);
  aug.k = static_cast<int>(aug.W.size());

  Digraph residual(n);
  for (EdgeId e = 0; e < m; ++e) {
    if (f.f[e] < I.x(e)) residual.add_edge(g.edge(e).tail, g.edge(e).head, 0);
    if (sgn(f.f[e]) > 0) residual.add_edge(g.edge(e).head, g.edge(e).tail, 0);
  }
  aug.hat_of.assign(n, -1);
  for (int i = 0; i < aug.k; ++i) {
    auto sccs = scc_topological(residual, aug.W[i]);
    aug.W_hat.push_back(sccs.front());
    auto in_hat = membership_mask(n, sccs.front());
    auto in_w = membership_mask(n, aug.W[i]);
    for (const Edge& r : residual.edges()) {
      ATSP_CHECK("augment", !(in_w[r.tail] && !in_hat[r.tail] && in_hat[r.head]),
                 "residual edge enters the first component");
    }
    for (VertexId v : sccs.front()) aug.hat_of[v] = i;
  }

  aug.graph = Digraph(n + aug.k);
  auto add = [&](VertexId t, VertexId h, EdgeId e) {
    EdgeId id = aug.graph.add_edge(t, h, I.cost(e));
    aug.origin.push_back(e);
    aug.edge_class.push_back(levels.edge_class[e]);
    return id;
  };
  aug.copy.assign(m, {{{-1, -1}, {-1, -1}}});
  for (EdgeId e = 0; e < m; ++e) aug.copy[e][0][0] = add(g.edge(e).tail, g.edge(e).head, e);
  for (EdgeId e = 0; e < m; ++e) {
    VertexId t = g.edge(e).tail, h = g.edge(e).head;
    int it = aug.hat_of[t], ih = aug.hat_of[h];
    if (it == ih) continue;
    if (ih >= 0) aug.copy[e][0][1] = add(t, aug.aux(ih), e);
    if (it >= 0) aug.copy[e][1][0] = add(aug.aux(it), h, e);
    if (it >= 0 && ih >= 0) aug.copy[e][1][1] = add(aug.aux(it), aug.aux(ih), e);
  }
  return aug;
}

SplitGraph build_split_graph(const AugmentedGraph& aug, const VertexSet& backbone_vertices) {
  const Digraph& gb = aug.graph;
  SplitGraph s;
  s.graph = Digraph(2 * gb.num_vertices());
  s.lower.assign(gb.num_edges(), -1);
  s.upper.assign(gb.num_edges(), -1);
  for (EdgeId e = 0; e < gb.num_edges(); ++e) {
    const Edge& ed = gb.edge(e);
    if (aug.edge_class[e] != EdgeClass::kBackward) {
      s.lower[e] = s.graph.add_edge(SplitGraph::node(ed.tail, 0), SplitGraph::node(ed.head, 0), ed.cost);
      s.base.push_back(e);
      s.level.push_back(0);
    }
    if (aug.edge_class[e] != EdgeClass::kForward) {
      s.upper[e] = s.graph.add_edge(SplitGraph::node(ed.tail, 1), SplitGraph::node(ed.head, 1), ed.cost);
      s.base.push_back(e);
      s.level.push_back(1);
    }
  }
  auto on_b = membership_mask(gb.num_vertices(), backbone_vertices);
  s.down.assign(gb.num_vertices(), -1);
  s.up.assign(gb.num_vertices(), -1);
  for (VertexId v = 0; v < gb.num_vertices(); ++v) {
    s.down[v] = s.graph.add_edge(SplitGraph::node(v, 1), SplitGraph::node(v, 0), 0);
    s.base.push_back(-1);
    s.level.push_back(-1);
    if (on_b[v]) {
      s.up[v] = s.graph.add_edge(SplitGraph::node(v, 0), SplitGraph::node(v, 1), 0);
      s.base.push_back(-1);
      s.level.push_back(-1);
    }
  }
  return s;
}

namespace {

struct RoutedPath {
  EdgeId in;
  std::vector<EdgeId> inner;
  EdgeId out;
  Rational lambda;
};

// Decomposes one unit of the flow crossing into U into weighted
// entry-path-exit triples. Cycles met inside U are cancelled on the working
// copy only.
std::vector<RoutedPath> decompose_through(const Digraph& s, std::vector<Rational> w, const std::vector<char>& in_u) {
  std::vector<EdgeId> entries;
  for (EdgeId e = 0; e < s.num_edges(); ++e) {
    if (!in_u[s.edge(e).tail] && in_u[s.edge(e).head]) entries.push_back(e);
  }
  std::vector<RoutedPath> out;
  Rational total = 0;
  const int cap = 4 * s.num_edges() + 8;
  for (int iter = 0; total < 1; ++iter) {
    ATSP_CHECK("reroute", iter < cap, "path decomposition does not terminate");
    EdgeId ein = -1;
    for (EdgeId e : entries) {
      if (sgn(w[e]) > 0) {
        ein = e;
        break;
      }
    }
    ATSP_CHECK("reroute", ein >= 0, "less than one unit of flow enters the set");
    std::vector<EdgeId> path;
    std::vector<int> pos(s.num_vertices(), -1);
    VertexId cur = s.edge(ein).head;
    pos[cur] = 0;
    EdgeId eout = -1;
    int guard = 0;
    while (eout < 0) {
      ATSP_CHECK("reroute", ++guard <= 4 * s.num_edges() + 8, "walk inside the set does not terminate");
      EdgeId next = -1;
      for (EdgeId e : s.out_edges(cur)) {
        if (sgn(w[e]) > 0) {
          next = e;
          break;
        }
      }
      ATSP_CHECK("reroute", next >= 0, "flow is not conserved inside the set");
      VertexId h = s.edge(next).head;
      if (!in_u[h]) {
        eout = next;
      } else if (pos[h] >= 0) {
        // Cancel the inner cycle on the working copy.
        std::vector<EdgeId> cyc(path.begin() + pos[h], path.end());
        cyc.push_back(next);
        Rational b = w[cyc.front()];
        for (EdgeId e : cyc) b = min_of(b, w[e]);
        for (EdgeId e : cyc) w[e] -= b;
        for (std::size_t j = pos[h]; j < path.size(); ++j) pos[s.edge(path[j]).head] = -1;
        path.resize(pos[h]);
        cur = h;
      } else {
        path.push_back(next);
        pos[h] = static_cast<int>(path.size());
        cur = h;
      }
    }
    Rational lam = 1 - total;
    lam = min_of(lam, w[ein]);
    lam = min_of(lam, w[eout]);
    for (EdgeId e : path) lam = min_of(lam, w[e]);
    w[ein] -= lam;
    w[eout] -= lam;
    for (EdgeId e : path) w[e] -= lam;
    total += lam;
    out.push_back({ein, path, eout, lam});
  }
  return out;
}

}  // namespace

SplitCirculation lift_and_reroute(const SubtourCoverInstance& inst, const WitnessFlow& f, const AugmentedGraph& aug) {
  const StronglyLaminarInstance& I = inst.pair.instance;
  const Digraph& g = I.graph();
  const int n = g.num_vertices();
  SplitCirculation c;
  c.split = build_split_graph(aug, inst.pair.backbone_vertices);
  const SplitGraph& s = c.split;
  const Digraph& sg = s.graph;
  c.z.assign(sg.num_edges(), Rational(0));
  std::vector<Rational> net(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (s.lower[e] >= 0) c.z[s.lower[e]] = f.f[e];
    if (s.upper[e] >= 0) c.z[s.upper[e]] = I.x(e) - f.f[e];
    net[g.edge(e).tail] += f.f[e];
    net[g.edge(e).head] -= f.f[e];
  }
  for (VertexId v = 0; v < n; ++v) {
    if (sgn(net[v]) > 0) {
      c.z[s.down[v]] = net[v];
    } else if (sgn(net[v]) < 0) {
      ATSP_CHECK("split", s.up[v] >= 0, "witness flow deficit off the backbone");
      c.z[s.up[v]] = -net[v];
    }
  }
  ATSP_CHECK("split", is_circulation(sg, c.z), "lifted flow is not a circulation");
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    Rational lo = s.lower[e] >= 0 ? c.z[s.lower[e]] : Rational(0);
    Rational hi = s.upper[e] >= 0 ? c.z[s.upper[e]] : Rational(0);
    ATSP_CHECK("split", lo + hi == I.x(e) && lo == f.f[e], "projection does not return (x, f)");
  }

  c.z_bar = c.z;
  c.q.assign(aug.k, -1);
  auto moved = [&](VertexId v) { return v >= aug.base_vertices ? 1 : 0; };
  for (int i = 0; i < aug.k; ++i) {
    std::vector<char> in_u(sg.num_vertices(), 0);
    for (VertexId v : aug.W_hat[i]) {
      in_u[SplitGraph::node(v, 0)] = 1;
      in_u[SplitGraph::node(v, 1)] = 1;
    }
    Rational cut = 0;
    for (EdgeId e = 0; e < sg.num_edges(); ++e) {
      if (in_u[sg.edge(e).tail] != in_u[sg.edge(e).head]) cut += c.z_bar[e];
    }
    ATSP_CHECK("reroute", cut >= 2, "flow across the component is below 2");

    std::vector<RoutedPath> paths = decompose_through(sg, c.z_bar, in_u);
    Rational mass[2] = {0, 0};
    for (const auto& p : paths) mass[s.level[p.in]] += p.lambda;
    const int q = mass[0] * 2 >= 1 ? 0 : 1;
    c.q[i] = q;
    Rational left(1, 2);
    const VertexId a = aug.aux(i);
    for (const auto& p : paths) {
      if (s.level[p.in] != q || sgn(left) == 0) continue;
      Rational lam = min_of(p.lambda, left);
      left -= lam;
      const EdgeId ebar_in = s.base[p.in];
      const EdgeId ebar_out = s.base[p.out];
      const EdgeId e_in = aug.origin[ebar_in];
      const EdgeId e_out = aug.origin[ebar_out];
      EdgeId to_aux = aug.copy[e_in][moved(aug.graph.edge(ebar_in).tail)][1];
      EdgeId from_aux = aug.copy[e_out][1][moved(aug.graph.edge(ebar_out).head)];
      ATSP_CHECK("reroute", to_aux >= 0 && from_aux >= 0, "missing auxiliary copy");
      ATSP_CHECK("reroute", aug.graph.edge(to_aux).head == a && aug.graph.edge(from_aux).tail == a,
                 "auxiliary copy has the wrong endpoint");
      const int p_level = s.level[p.out];
      ATSP_CHECK("reroute", p_level <= q, "path climbs from the lower to the upper level");
      EdgeId split_in = q == 0 ? s.lower[to_aux] : s.upper[to_aux];
      EdgeId split_out = p_level == 0 ? s.lower[from_aux] : s.upper[from_aux];
      ATSP_CHECK("reroute", split_in >= 0 && split_out >= 0, "auxiliary copy missing on its level");
      c.z_bar[p.in] -= lam;
      c.z_bar[split_in] += lam;
      for (EdgeId e : p.inner) c.z_bar[e] -= lam;
      c.z_bar[p.out] -= lam;
      c.z_bar[split_out] += lam;
      if (p_level < q) c.z_bar[s.down[a]] += lam;
    }
    ATSP_CHECK("reroute", sgn(left) == 0, "could not route half a unit");
  }

  ATSP_CHECK("reroute", is_circulation(sg, c.z_bar), "rerouted flow is not a circulation");
  ATSP_BOUND("reroute", split_cost(sg, c.z_bar) <= split_cost(sg, c.z), "rerouting increased the cost");
  for (int i = 0; i < aug.k; ++i) {
    const VertexId a = aug.aux(i);
    Rational in[2] = {0, 0};
    for (EdgeId e : sg.in_edges(SplitGraph::node(a, 0))) {
      if (e != s.down[a]) in[0] += c.z_bar[e];
    }
    for (EdgeId e : sg.in_edges(SplitGraph::node(a, 1))) in[1] += c.z_bar[e];
    const int q = c.q[i];
    ATSP_CHECK("reroute", in[q] == Rational(1, 2) && sgn(in[1 - q]) == 0,
               "auxiliary vertex does not receive exactly half a unit on one level");
  }
  return c;
}

RoundedCover round_circulation(const SubtourCoverInstance& inst, const AugmentedGraph& aug,
                               const SplitCirculation& circ) {
  const StronglyLaminarInstance& I = inst.pair.instance;
  const int n = I.num_vertices();
  const SplitGraph& s = circ.split;
  const Digraph& sg = s.graph;
  const int ms = sg.num_edges();
  std::vector<Rational> cap(ms);
  for (EdgeId e = 0; e < ms; ++e) cap[e] = ceil_of(2 * circ.z_bar[e]);
  std::vector<Rational> in_cap(sg.num_vertices());
  for (EdgeId e = 0; e < ms; ++e) in_cap[sg.edge(e).head] += circ.z_bar[e];
  for (auto& v : in_cap) v = ceil_of(2 * v);

  MinCostCirculation mcc(sg.num_vertices());
  std::vector<int> entry(sg.num_vertices());
  for (VertexId v = 0; v < sg.num_vertices(); ++v) entry[v] = v;
  std::vector<int> gate(sg.num_vertices(), -1);
  for (VertexId v = 0; v < n; ++v) {
    VertexId node = SplitGraph::node(v, 1);
    entry[node] = mcc.add_node();
    gate[node] = mcc.add_arc(entry[node], node, 0, in_cap[node], 0);
  }
  for (int i = 0; i < aug.k; ++i) {
    VertexId node = SplitGraph::node(aug.aux(i), circ.q[i]);
    entry[node] = mcc.add_node();
    gate[node] = mcc.add_arc(entry[node], node, 1, 1, 0);
  }
  std::vector<int> arc_of(ms, -1);
  for (EdgeId e = 0; e < ms; ++e) {
    if (sgn(cap[e]) == 0) continue;
    arc_of[e] = mcc.add_arc(sg.edge(e).tail, entry[sg.edge(e).head], 0, cap[e], sg.edge(e).cost);
  }
  ATSP_CHECK("round", mcc.solve(), "integral circulation problem is infeasible");

  RoundedCover out;
  out.z_star.assign(ms, Rational(0));
  for (EdgeId e = 0; e < ms; ++e) {
    if (arc_of[e] >= 0) out.z_star[e] = mcc.flow(arc_of[e]);
    ATSP_CHECK("round", is_integer(out.z_star[e]), "rounded flow is fractional");
    ATSP_CHECK("round.capacity", sgn(out.z_star[e]) >= 0 && out.z_star[e] <= cap[e],
               "rounded flow exceeds the doubled fractional flow rounded up");
  }
  ATSP_CHECK("round", is_circulation(sg, out.z_star), "rounded flow is not a circulation");
  ATSP_BOUND("round.cost", split_cost(sg, out.z_star) <= 2 * split_cost(sg, circ.z_bar),
             "rounded cost exceeds twice the fractional cost");
  std::vector<Rational> in_star(sg.num_vertices());
  for (EdgeId e = 0; e < ms; ++e) in_star[sg.edge(e).head] += out.z_star[e];
  for (VertexId v = 0; v < n; ++v) {
    VertexId node = SplitGraph::node(v, 1);
    ATSP_CHECK("round.indegree", in_star[node] <= in_cap[node], "upper-level in-flow above its rounded bound");
  }
  for (int i = 0; i < aug.k; ++i) {
    VertexId a0 = SplitGraph::node(aug.aux(i), 0), a1 = SplitGraph::node(aug.aux(i), 1);
    ATSP_CHECK("round.aux", in_star[a0] == 1 || in_star[a1] == 1, "no unit enters the auxiliary vertex");
  }

  // Image on the augmented graph.
  const Digraph& gb = aug.graph;
  out.F_bar = EdgeMultiset(gb.num_edges());
  out.f_star.assign(gb.num_edges(), 0);
  for (EdgeId e = 0; e < gb.num_edges(); ++e) {
    Rational lo = s.lower[e] >= 0 ? out.z_star[s.lower[e]] : Rational(0);
    Rational hi = s.upper[e] >= 0 ? out.z_star[s.upper[e]] : Rational(0);
    out.F_bar.add(e, Rational(lo + hi).get_num().get_si());
    out.f_star[e] = lo.get_num().get_si();
  }
  ATSP_CHECK("round", is_eulerian_connected(gb, out.F_bar).eulerian, "image of the rounded flow is not Eulerian");

  for (int i = 0; i < aug.k; ++i) {
    std::int64_t in = 0, outdeg = 0;
    for (EdgeId e : gb.in_edges(aug.aux(i))) in += out.F_bar.count(e);
    for (EdgeId e : gb.out_edges(aug.aux(i))) outdeg += out.F_bar.count(e);
    ATSP_CHECK("round.aux-single-entry", in == 1 && outdeg == 1, "auxiliary vertex not entered exactly once");
  }
  std::vector<std::pair<VertexId, VertexId>> arcs;
  for (EdgeId e = 0; e < gb.num_edges(); ++e) {
    if (out.f_star[e] > 0) arcs.emplace_back(gb.edge(e).tail, gb.edge(e).head);
  }
  ATSP_CHECK("round.acyclic", is_acyclic(gb.num_vertices(), arcs), "lower-level flow has a cycle");

  // Components of F_bar away from the backbone.
  auto label = component_labels(gb, out.F_bar);
  std::vector<char> touches_b(gb.num_vertices(), 0);
  for (VertexId v : inst.pair.backbone_vertices) touches_b[label[v]] = 1;
  std::vector<std::int64_t> indeg(gb.num_vertices(), 0);
  for (EdgeId e = 0; e < gb.num_edges(); ++e) {
    const std::int64_t c = out.F_bar.count(e);
    if (c == 0) continue;
    indeg[gb.edge(e).head] += c;
    if (touches_b[label[gb.edge(e).tail]]) continue;
    ATSP_CHECK("round.free-zero-witness", out.f_star[e] == 0, "lower-level flow in a backbone-free component");
    ATSP_CHECK("round.free-no-forward", aug.edge_class[e] != EdgeClass::kForward,
               "forward edge in a backbone-free component");
  }
  for (VertexId v = 0; v < n; ++v) {
    if (touches_b[label[v]] || sgn(I.vertex_weight(v)) == 0) continue;
    ATSP_CHECK("round.free-indegree", indeg[v] <= 2, "in-degree above 2 in a backbone-free component");
  }
  for (int i = 0; i < aug.k; ++i) {
    std::vector<char> in_set(gb.num_vertices(), 0);
    for (VertexId v : aug.W[i]) in_set[v] = 1;
    in_set[aug.aux(i)] = 1;
    bool crossed = false;
    for (EdgeId e : out.F_bar.support()) crossed = crossed || in_set[gb.edge(e).tail] != in_set[gb.edge(e).head];
    ATSP_CHECK("round.aux-crossing", crossed, "rounded edges do not leave the component and its auxiliary vertex");
  }

  // Every cycle of the rounded split flow whose image crosses a member of
  // size >= 2 climbs to the upper level at a backbone vertex.
  {
    const LaminarFamily& fam = I.family();
    std::vector<std::int64_t> w(ms);
    for (EdgeId e = 0; e < ms; ++e) w[e] = out.z_star[e].get_num().get_si();
    for (EdgeId first = 0; first < ms; ++first) {
      while (w[first] > 0) {
        std::vector<EdgeId> walk{first};
        std::vector<int> pos(sg.num_vertices(), -1);
        pos[sg.edge(first).tail] = 0;
        VertexId cur = sg.edge(first).head;
        while (pos[cur] < 0) {
          pos[cur] = static_cast<int>(walk.size());
          EdgeId nx = -1;
          for (EdgeId e : sg.out_edges(cur)) {
            if (w[e] > 0) {
              nx = e;
              break;
            }
          }
          ATSP_CHECK("split-cycle", nx >= 0, "rounded flow is not conserved");
          walk.push_back(nx);
          cur = sg.edge(nx).head;
        }
        std::vector<EdgeId> cyc(walk.begin() + pos[cur], walk.end());
        bool crosses = false, climbs = false;
        for (EdgeId e : cyc) {
          if (s.base[e] >= 0) {
            const Edge& oe = I.graph().edge(aug.origin[s.base[e]]);
            crosses = crosses || crosses_big_member(fam, oe.tail, oe.head);
          } else if (sg.edge(e).head % 2 == 1) {
            climbs = true;
          }
        }
        ATSP_CHECK("split-cycle", !crosses || climbs, "member-crossing cycle never visits the backbone");
        for (EdgeId e : cyc) --w[e];
      }
    }
  }
  return out;
}

EdgeMultiset map_back(const SubtourCoverInstance& inst, const AugmentedGraph& aug, const RoundedCover& rounded) {
  const StronglyLaminarInstance& I = inst.pair.instance;
  const Digraph& g = I.graph();
  const LaminarFamily& fam = I.family();
  const Digraph& gb = aug.graph;
  const int n = g.num_vertices();
  EdgeMultiset F(g.num_edges());
  for (EdgeId e : rounded.F_bar.support()) F.add(aug.origin[e], rounded.F_bar.count(e));
  for (int i = 0; i < aug.k; ++i) {
    const VertexId a = aug.aux(i);
    VertexId s = -1, t = -1;
    for (EdgeId e : gb.in_edges(a)) {
      if (rounded.F_bar.count(e) > 0) s = g.edge(aug.origin[e]).head;
    }
    for (EdgeId e : gb.out_edges(a)) {
      if (rounded.F_bar.count(e) > 0) t = g.edge(aug.origin[e]).tail;
    }
    ATSP_CHECK("map-back", s >= 0 && t >= 0, "auxiliary vertex unused");
    auto path = bfs_path(g, s, t, membership_mask(n, aug.W[i]));
    ATSP_CHECK("map-back", path.has_value(), "component does not induce a strongly connected subgraph");
    Rational cost = 0;
    for (EdgeId e : *path) {
      F.add(e);
      cost += I.cost(e);
      ATSP_CHECK("map-back", !crosses_big_member(fam, g.edge(e).tail, g.edge(e).head),
                 "closing path crosses a member");
    }
    Rational budget = 0;
    for (VertexId v : aug.W[i]) budget += 2 * I.vertex_weight(v);
    ATSP_BOUND("map-back", cost <= budget, "closing path costs more than sum 2y_v over the component");
  }
  return F;
}

void check_subtour_cover_solution(const SubtourCoverInstance& inst, const EdgeMultiset& F) {
  const StronglyLaminarInstance& I = inst.pair.instance;
  const Digraph& g = I.graph();
  const LaminarFamily& fam = I.family();
  const int n = g.num_vertices();
  ATSP_CHECK("cover", is_eulerian_connected(g, F).eulerian, "cover is not Eulerian");
  for (const VertexSet& W : cover_components(inst)) {
    auto in = membership_mask(n, W);
    bool hit = false;
    for (EdgeId e : F.support()) hit = hit || in[g.edge(e).tail] != in[g.edge(e).head];
    ATSP_CHECK("cover", hit, "a component of H is not entered");
  }
  auto label = component_labels(g, F);
  auto on_b = membership_mask(n, inst.pair.backbone_vertices);
  std::vector<char> touches_b(n, 0), crosses(n, 0);
  std::vector<Rational> comp_cost(n), comp_weight(n);
  for (VertexId v = 0; v < n; ++v) {
    if (on_b[v]) touches_b[label[v]] = 1;
    comp_weight[label[v]] += 2 * I.vertex_weight(v);
  }
  for (EdgeId e : F.support()) {
    const Edge& ed = g.edge(e);
    if (crosses_big_member(fam, ed.tail, ed.head)) crosses[label[ed.tail]] = 1;
    comp_cost[label[ed.tail]] += F.count(e) * I.cost(e);
  }
  Rational off = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (!on_b[v]) off += 2 * I.vertex_weight(v);
  }
  for (int c = 0; c < n; ++c) {
    ATSP_CHECK("cover", !crosses[c] || touches_b[c], "member-crossing component misses the backbone");
    if (!touches_b[c]) {
      ATSP_BOUND("cover.component", comp_cost[c] <= 3 * comp_weight[c],
                 "backbone-free component costs more than 3 sum 2y_v");
    }
  }
  ATSP_BOUND("cover.total", F.cost(g) <= 2 * I.lp_value() + off, "cover costs more than 2 LP + sum 2y_v");
}

EdgeMultiset subtour_cover(const SubtourCoverInstance& inst, SubtourCoverStats* stats) {
  validate_subtour_cover_instance(inst);
  LevelStructure levels = build_level_structure(inst.pair);
  WitnessFlow f = compute_witness_flow(inst, levels);
  AugmentedGraph aug = build_augmented_graph(inst, levels, f);
  SplitCirculation circ = lift_and_reroute(inst, f, aug);
  RoundedCover rounded = round_circulation(inst, aug, circ);
  EdgeMultiset F = map_back(inst, aug, rounded);
  check_subtour_cover_solution(inst, F);
  if (stats) {
    stats->components = aug.k;
    stats->split_vertices = circ.split.graph.num_vertices();
    stats->split_edges = circ.split.graph.num_edges();
    stats->witness_boundary = f.boundary_value;
    stats->cost = F.cost(inst.pair.instance.graph());
  }
  return F;
}

}  // namespace atsp
