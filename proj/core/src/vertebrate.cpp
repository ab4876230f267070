#include "atsp/vertebrate.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <string>

#include "atsp/check.hpp"
#include "atsp/errors.hpp"
#include "atsp/svensson.hpp"

namespace atsp {

namespace {

VertexSet touched_vertices(const Digraph& g, const EdgeMultiset& F) {
  VertexSet out;
  for (EdgeId e : F.support()) {
    out.push_back(g.edge(e).tail);
    out.push_back(g.edge(e).head);
  }
  return make_vertex_set(std::move(out));
}

// (W, F) connected and Eulerian with F inside E[W].
bool is_tour_on(const Digraph& g, const EdgeMultiset& F, const VertexSet& W) {
  auto mask = membership_mask(g.num_vertices(), W);
  for (EdgeId e : F.support()) {
    if (!mask[g.edge(e).tail] || !mask[g.edge(e).head]) return false;
  }
  EulerianCheck chk = is_eulerian_connected(g, F);
  if (!chk.eulerian) return false;
  auto label = component_labels(g, F);
  for (VertexId v : W) {
    if (label[v] != label[W.front()]) return false;
  }
  return true;
}

void append_path(EdgeMultiset& F, const std::vector<EdgeId>& path) {
  for (EdgeId e : path) F.add(e);
}

struct Reducer {
  const StronglyLaminarInstance& inst;
  const NicePathTable& paths;
  const VertebrateSolver& solver;
  Rational kappa;
  Rational eta;
  ReductionStats stats;

  EdgeMultiset run(int W);
  EdgeMultiset lift(const Digraph& gp, const std::vector<EdgeId>& origin, const EdgeMultiset& Fp,
                    VertexId outside_vertex, const std::vector<int>& owner);
};

// Lifts F' from the contracted graph back into the instance graph. Passes
// through the outside vertex are replaced by a fixed path inside W; passes
// through a contracted member are bridged by a fixed path inside it.
EdgeMultiset Reducer::lift(const Digraph& gp, const std::vector<EdgeId>& origin, const EdgeMultiset& Fp,
                           VertexId outside_vertex, const std::vector<int>& owner) {
  const Digraph& g = inst.graph();
  EdgeMultiset lifted(g.num_edges());
  auto label = component_labels(gp, Fp);
  std::vector<char> done(gp.num_vertices(), 0);
  for (EdgeId e : Fp.support()) {
    int comp = label[gp.edge(e).tail];
    if (done[comp]) continue;
    done[comp] = 1;
    EdgeMultiset part(gp.num_edges());
    for (EdgeId f : Fp.support()) {
      if (label[gp.edge(f).tail] == comp) part.add(f, Fp.count(f));
    }
    VertexId start = gp.edge(e).tail == outside_vertex ? gp.edge(e).head : gp.edge(e).tail;
    std::vector<EdgeId> walk = euler_walk(gp, part, start);

    struct Segment {
      VertexId from, to;
      std::vector<EdgeId> edges;
    };
    std::vector<Segment> segs;
    for (std::size_t k = 0; k < walk.size(); ++k) {
      const Edge& oe = g.edge(origin[walk[k]]);
      if (gp.edge(walk[k]).head == outside_vertex) {
        ATSP_CHECK("lift", k + 1 < walk.size(), "walk ends at the outside vertex");
        const Edge& next = g.edge(origin[walk[k + 1]]);
        segs.push_back({oe.tail, next.head, paths.path(oe.tail, next.head)});
        ++k;
      } else {
        segs.push_back({oe.tail, oe.head, {origin[walk[k]]}});
      }
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
      append_path(lifted, segs[k].edges);
      VertexId a = segs[k].to;
      VertexId b = segs[(k + 1) % segs.size()].from;
      if (a != b) {
        ATSP_CHECK("lift", owner[a] >= 0 && owner[a] == owner[b], "walk junction outside a contracted member");
        append_path(lifted, paths.path(a, b));
      }
    }
  }
  return lifted;
}

EdgeMultiset Reducer::run(int W) {
  const Digraph& g = inst.graph();
  const LaminarFamily& fam = inst.family();
  const int n = g.num_vertices();
  ++stats.calls;
  ATSP_CHECK("reduce", stats.calls <= fam.size() + 1, "more recursive calls than family members");
  VertexSet Wset = members_of(inst, W);
  EdgeMultiset F(g.num_edges());
  if (Wset.size() == 1) return F;

  Backbone bb = construct_backbone(inst, paths, W);
  const Rational value_w = bb.dw.value;
  const Rational& dw = bb.dw.dw;

  // Contraction classes: outside of W first, then the untouched members.
  std::vector<VertexSet> classes;
  if (W != kWholeSet) classes.push_back(complement(n, Wset));
  for (int L : bb.untouched) classes.push_back(fam.set(L));
  auto [g0, cmap] = contract(g, classes);
  const int np = g0.num_vertices();
  const int first_class = np - static_cast<int>(classes.size());
  const VertexId outside_vertex = W != kWholeSet ? first_class : -1;
  const int member_offset = W != kWholeSet ? 1 : 0;
  stats.max_contracted_size = std::max(stats.max_contracted_size, np);

  // Parallel edges have equal induced cost; merge them and add up x.
  std::map<std::pair<VertexId, VertexId>, EdgeId> merged;
  Digraph gp(np);
  std::vector<EdgeId> origin;
  std::vector<Rational> xp;
  std::vector<EdgeId> parent_to_gp(g.num_edges(), -1);
  for (EdgeId e = 0; e < g0.num_edges(); ++e) {
    auto key = std::make_pair(g0.edge(e).tail, g0.edge(e).head);
    EdgeId o = cmap.edge_origin[e];
    auto it = merged.find(key);
    if (it == merged.end()) {
      EdgeId id = gp.add_edge(key.first, key.second, 0);
      merged.emplace(key, id);
      origin.push_back(o);
      xp.push_back(inst.x(o));
      parent_to_gp[o] = id;
    } else {
      origin[it->second] = std::min(origin[it->second], o);
      xp[it->second] += inst.x(o);
      parent_to_gp[o] = it->second;
    }
  }

  std::vector<char> on_backbone = membership_mask(n, bb.vertices);
  std::vector<VertexSet> fsets;
  std::vector<Rational> fweights;
  if (W != kWholeSet && sgn(dw) > 0) {
    VertexSet inner;
    for (VertexId v = 0; v < np; ++v) {
      if (v != outside_vertex) inner.push_back(v);
    }
    fsets.push_back(inner);
    fweights.push_back(dw / 2);
  }
  for (int i = 0; i < fam.size(); ++i) {
    if (i == W || !fam.nested_in(i, W)) continue;
    bool touches = false;
    for (VertexId v : fam.set(i)) touches = touches || on_backbone[v];
    if (!touches) continue;
    VertexSet img;
    for (VertexId v : fam.set(i)) img.push_back(cmap.vertex_image[v]);
    fsets.push_back(make_vertex_set(std::move(img)));
    fweights.push_back(fam.weight(i));
  }
  std::vector<int> owner(n, -1);  // vertex -> index into bb.untouched
  for (std::size_t k = 0; k < bb.untouched.size(); ++k) {
    int L = bb.untouched[k];
    for (VertexId v : fam.set(L)) owner[v] = static_cast<int>(k);
    fsets.push_back({first_class + member_offset + static_cast<int>(k)});
    Rational dl = value_and_dw(inst, paths, L).dw;
    Rational yl = fam.weight(L) + dl / 2;
    fweights.push_back(yl);
  }

  VertebratePair pair;
  pair.instance = StronglyLaminarInstance(gp, LaminarFamily(np, fsets, fweights), xp);
  validate_strongly_laminar(pair.instance);
  pair.backbone = EdgeMultiset(gp.num_edges());
  for (EdgeId e : bb.edges.support()) {
    ATSP_CHECK("reduce", parent_to_gp[e] >= 0, "backbone edge lost in contraction");
    pair.backbone.add(parent_to_gp[e], bb.edges.count(e));
  }
  for (VertexId v : bb.vertices) pair.backbone_vertices.push_back(cmap.vertex_image[v]);
  pair.backbone_vertices = make_vertex_set(std::move(pair.backbone_vertices));
  validate_vertebrate_pair(pair);
  ATSP_CHECK("reduce", pair.backbone.cost(pair.instance.graph()) == bb.edges.cost(g), "backbone cost changed under contraction");

  ++stats.solver_calls;
  EdgeMultiset Fp = solver(pair);
  {
    EdgeMultiset tour = Fp;
    tour.add_all(pair.backbone);
    EulerianCheck chk = is_eulerian_connected(gp, tour);
    ATSP_CHECK("vertebrate-solver", chk.eulerian && chk.connected(), "E(B) + F is not a tour");
    Rational budget = kappa * pair.instance.lp_value() + eta * offbackbone_weight(pair);
    ATSP_BOUND("vertebrate-solver", Fp.cost(pair.instance.graph()) <= budget, "solver exceeds kappa LP + eta sum 2y_v");
  }

  EdgeMultiset lifted = lift(gp, origin, Fp, outside_vertex, owner);
  ATSP_CHECK("lift", is_eulerian_connected(g, lifted).eulerian, "lifted edges are not Eulerian");
  ATSP_BOUND("lift", lifted.cost(g) <= Fp.cost(pair.instance.graph()), "lifting increased the cost");

  F.add_all(lifted);
  for (int L : bb.untouched) F.add_all(run(L));
  F.add_all(bb.edges);

  ATSP_CHECK("reduce", is_tour_on(g, F, Wset), "result is not a tour of G[W]");
  Rational bound = (2 * kappa + 2) * value_w + (kappa + eta) * (value_w - dw);
  ATSP_BOUND("reduce", F.cost(g) <= bound, "tour in G[W] exceeds (2k+2)value(W) + (k+eta)(value(W)-D_W)");
  return F;
}

}  // namespace

void validate_vertebrate_pair(const VertebratePair& pair) {
  const Digraph& g = pair.instance.graph();
  const LaminarFamily& fam = pair.instance.family();
  ATSP_CHECK("vertebrate-pair", !pair.backbone_vertices.empty(), "backbone has no vertex");
  ATSP_CHECK("vertebrate-pair", pair.backbone.universe() == g.num_edges(), "backbone over the wrong graph");
  EulerianCheck chk = is_eulerian_connected(g, pair.backbone);
  ATSP_CHECK("vertebrate-pair", chk.eulerian, "backbone is not Eulerian");
  if (!pair.backbone.empty()) {
    ATSP_CHECK("vertebrate-pair", touched_vertices(g, pair.backbone) == pair.backbone_vertices,
               "V(B) does not match the backbone edges");
    auto label = component_labels(g, pair.backbone);
    for (VertexId v : pair.backbone_vertices) {
      ATSP_CHECK("vertebrate-pair", label[v] == label[pair.backbone_vertices.front()], "backbone is not connected");
    }
  } else {
    ATSP_CHECK("vertebrate-pair", pair.backbone_vertices.size() == 1, "empty backbone must name one vertex");
  }
  for (int i = 0; i < fam.size(); ++i) {
    if (fam.set(i).size() < 2) continue;
    ATSP_CHECK("vertebrate-pair", intersects(fam.set(i), pair.backbone_vertices),
               "member " + std::to_string(i) + " not touched by the backbone");
  }
}

Rational offbackbone_weight(const VertebratePair& pair) {
  auto on = membership_mask(pair.instance.num_vertices(), pair.backbone_vertices);
  Rational total = 0;
  for (VertexId v = 0; v < pair.instance.num_vertices(); ++v) {
    if (!on[v]) total += 2 * pair.instance.vertex_weight(v);
  }
  return total;
}

Backbone construct_backbone(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W) {
  const Digraph& g = inst.graph();
  const LaminarFamily& fam = inst.family();
  Backbone bb;
  bb.dw = value_and_dw(inst, paths, W);
  const VertexId u = bb.dw.u;
  const VertexId v = bb.dw.v;
  bb.edges = EdgeMultiset(g.num_edges());
  append_path(bb.edges, paths.path(u, v));
  append_path(bb.edges, paths.path(v, u));
  bb.vertices = bb.edges.empty() ? VertexSet{u} : touched_vertices(g, bb.edges);
  ATSP_BOUND("backbone", bb.edges.cost(g) <= 2 * bb.dw.dw, "c(B) exceeds 2 D_W");

  auto on = membership_mask(g.num_vertices(), bb.vertices);
  auto touches = [&](int i) {
    for (VertexId x : fam.set(i)) {
      if (on[x]) return true;
    }
    return false;
  };
  for (int i = 0; i < fam.size(); ++i) {
    if (i == W || !fam.nested_in(i, W) || touches(i)) continue;
    int p = fam.parent(i);
    if (p == W || (p != kWholeSet && touches(p))) bb.untouched.push_back(i);
  }
  Rational lhs = 0;
  for (int L : bb.untouched) lhs += 2 * fam.weight(L) + family_value(inst, L);
  ATSP_BOUND("backbone", lhs <= bb.dw.value - bb.dw.dw, "untouched members carry more than value(W) - D_W");
  return bb;
}

EdgeMultiset reduce_and_solve(const StronglyLaminarInstance& inst, const NicePathTable& paths, int W,
                              const VertebrateSolver& solver, const Rational& kappa, const Rational& eta,
                              ReductionStats* stats) {
  Reducer r{inst, paths, solver, kappa, eta, {}};
  EdgeMultiset F = r.run(W);
  if (stats) *stats = r.stats;
  return F;
}

TourCertificate solve_atsp(const Digraph& g, const VertebrateAlgorithm& algorithm, SolveStats* stats) {
  using clock = std::chrono::steady_clock;
  TourCertificate cert;
  cert.tour = EdgeMultiset(g.num_edges());
  if (g.num_vertices() == 1) {
    cert.cost = 0;
    cert.lp_value = 0;
    cert.ratio = 1;
    return cert;
  }
  auto t0 = clock::now();
  LaminarBuild build = build_strongly_laminar_instance(g);
  auto t1 = clock::now();
  const StronglyLaminarInstance& inst = build.instance;
  NicePathTable paths(inst);
  ReductionStats rstats;
  EdgeMultiset F = reduce_and_solve(inst, paths, kWholeSet, algorithm.solve, algorithm.kappa, algorithm.eta, &rstats);
  auto t2 = clock::now();

  Rational reduced_cost = F.cost(inst.graph());
  for (EdgeId e : F.support()) cert.tour.add(build.edge_origin[e], F.count(e));
  cert.cost = cert.tour.cost(g);
  cert.lp_value = build.lp_value;
  ATSP_CHECK("solve", cert.cost == reduced_cost, "tour cost differs between input and induced costs");
  EulerianCheck chk = is_eulerian_connected(g, cert.tour);
  ATSP_CHECK("solve", chk.eulerian && chk.connected(), "result is not a tour");
  cert.walk = euler_walk(g, cert.tour, 0);
  // Zero-cost optimum: 0/0 is reported as ratio 1.
  cert.ratio = sgn(cert.lp_value) > 0 ? Rational(cert.cost / cert.lp_value) : Rational(1);
  Rational factor = 3 * algorithm.kappa + algorithm.eta + 2;
  ATSP_BOUND("solve", cert.cost <= factor * cert.lp_value, "tour exceeds (3 kappa + eta + 2) LP");

  if (stats) {
    stats->lp = build.stats;
    stats->reduction = rstats;
    stats->family_size = inst.family().size();
    stats->seconds_lp = std::chrono::duration<double>(t1 - t0).count();
    stats->seconds_reduction = std::chrono::duration<double>(t2 - t1).count();
  }
  return cert;
}

TourCertificate solve_atsp(const Digraph& g, const Rational& epsilon, SolveStats* stats) {
  if (sgn(epsilon) <= 0) throw InputError("epsilon must be positive");
  VertebrateAlgorithm algo;
  algo.kappa = 2;
  algo.eta = 14 + epsilon;
  algo.solve = [epsilon](const VertebratePair& pair) { return vertebrate_solve(pair, epsilon); };
  return solve_atsp(g, algo, stats);
}

}  // namespace atsp
