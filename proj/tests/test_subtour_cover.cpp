#include <doctest.h>

#include <random>

#include "atsp/errors.hpp"
#include "atsp/lp.hpp"
#include "atsp/subtour_cover.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace atsp;

namespace {

const std::vector<SubtourCoverInstance>& instances() {
  static const std::vector<SubtourCoverInstance> all = fixture::cover_instances(16);
  return all;
}

SubtourCoverInstance two_tri_instance() {
  LaminarBuild b = build_strongly_laminar_instance(fixture::two_tri());
  NicePathTable paths(b.instance);
  Backbone bb = construct_backbone(b.instance, paths, kWholeSet);
  return SubtourCoverInstance{VertebratePair{b.instance, bb.edges, bb.vertices},
                              EdgeMultiset(b.instance.graph().num_edges())};
}

// Two triangles joined at 0 and 3, costs induced by {0,1,2} (weight 2) and
// the singletons 1, 2, 4, 5 (weight 1/2). The backbone is the first triangle;
// H is the second one, which no member of size >= 2 separates.
SubtourCoverInstance triangle_h_instance() {
  Digraph g(6);
  const Rational h(parse_rational("1/2"));
  g.add_edge(0, 1, h);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 0, h);
  g.add_edge(3, 4, h);
  g.add_edge(4, 5, 1);
  g.add_edge(5, 3, h);
  g.add_edge(0, 3, 2);
  g.add_edge(3, 0, 2);
  LaminarFamily fam(6, {{0, 1, 2}, {1}, {2}, {4}, {5}}, {Rational(2), h, h, h, h});
  StronglyLaminarInstance inst(g, fam, std::vector<Rational>(8, Rational(1)));
  EdgeMultiset backbone(8), H(8);
  for (EdgeId e : {0, 1, 2}) backbone.add(e);
  for (EdgeId e : {3, 4, 5}) H.add(e);
  return SubtourCoverInstance{VertebratePair{inst, backbone, {0, 1, 2}}, H};
}

void report(const checks::Problems& p) {
  for (const auto& s : p) MESSAGE(s);
}

}  // namespace

TEST_CASE("instance validation rejects H on the backbone") {
  SubtourCoverInstance inst = two_tri_instance();
  CHECK_NOTHROW(validate_subtour_cover_instance(inst));
  const Digraph& g = inst.pair.instance.graph();
  // Any edge with a backbone endpoint, twice around a 2-cycle, is refused.
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (EdgeId f = 0; f < g.num_edges(); ++f) {
      if (g.edge(e).tail == g.edge(f).head && g.edge(e).head == g.edge(f).tail &&
          std::binary_search(inst.pair.backbone_vertices.begin(), inst.pair.backbone_vertices.end(),
                             g.edge(e).tail)) {
        SubtourCoverInstance bad = inst;
        bad.H.add(e);
        bad.H.add(f);
        CHECK_THROWS_AS(validate_subtour_cover_instance(bad), InternalError);
      }
    }
  }
}

TEST_CASE("level structure classes edges by depth") {
  SubtourCoverInstance inst = two_tri_instance();
  LevelStructure ls = build_level_structure(inst.pair);
  const Digraph& g = inst.pair.instance.graph();
  REQUIRE(ls.levels.size() >= 1);
  CHECK(ls.levels[0].size() == 6u);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    int a = ls.r[g.edge(e).tail], b = ls.r[g.edge(e).head];
    EdgeClass want = a < b ? EdgeClass::kForward : a > b ? EdgeClass::kBackward : EdgeClass::kNeutral;
    CHECK(ls.edge_class[e] == want);
  }
}

TEST_CASE("witness flow: conditions, acyclicity and boundary minimality") {
  std::mt19937_64 rng(2024);
  for (const auto& inst : instances()) {
    LevelStructure ls = build_level_structure(inst.pair);
    WitnessFlow wf = compute_witness_flow(inst, ls);
    auto p = checks::witness_problems(inst, wf.f);
    CHECK(p.empty());
    report(p);
    CHECK(is_witness_flow(inst.pair, ls, wf.f));
    CHECK(checks::support_acyclic(inst.pair.instance.graph(), wf.f));
    CHECK(checks::boundary_mass(inst, wf.f) == wf.boundary_value);
    int moved = 0;
    for (int k = 0; k < 100; ++k) {
      auto g = checks::random_witness_neighbor(inst, wf.f, rng);
      if (g != wf.f) ++moved;
      REQUIRE(checks::witness_problems(inst, g).empty());
      CHECK(checks::boundary_mass(inst, g) >= wf.boundary_value);
    }
    (void)moved;
  }
}

TEST_CASE("perturbation generator leaves the feasible set unchanged in kind") {
  // Sanity check of the test helper itself: it must produce moves.
  std::mt19937_64 rng(9);
  int moved = 0;
  for (const auto& inst : instances()) {
    WitnessFlow wf = compute_witness_flow(inst, build_level_structure(inst.pair));
    for (int k = 0; k < 20; ++k) moved += checks::random_witness_neighbor(inst, wf.f, rng) != wf.f;
  }
  CHECK(moved > 0);
}

TEST_CASE("augmented and split graphs") {
  for (const auto& inst : instances()) {
    LevelStructure ls = build_level_structure(inst.pair);
    WitnessFlow wf = compute_witness_flow(inst, ls);
    AugmentedGraph aug = build_augmented_graph(inst, ls, wf);
    const Digraph& g = inst.pair.instance.graph();
    CHECK(aug.base_edges == g.num_edges());
    CHECK(aug.graph.num_vertices() == g.num_vertices() + aug.k);
    CHECK(aug.W == cover_components(inst));
    for (EdgeId e = 0; e < aug.graph.num_edges(); ++e) {
      const Edge& a = aug.graph.edge(e);
      const Edge& o = g.edge(aug.origin[e]);
      CHECK(a.cost == o.cost);
      CHECK(aug.edge_class[e] == ls.edge_class[aug.origin[e]]);
      if (e < aug.base_edges) {
        CHECK(a.tail == o.tail);
        CHECK(a.head == o.head);
      } else {
        // A moved endpoint lands on the auxiliary vertex of the W^ holding it.
        if (a.tail != o.tail) CHECK(a.tail == aug.aux(aug.hat_of[o.tail]));
        if (a.head != o.head) CHECK(a.head == aug.aux(aug.hat_of[o.head]));
      }
    }
    for (int i = 0; i < aug.k; ++i) {
      CHECK(std::includes(aug.W[i].begin(), aug.W[i].end(), aug.W_hat[i].begin(), aug.W_hat[i].end()));
      CHECK_FALSE(aug.W_hat[i].empty());
    }
    SplitGraph sg = build_split_graph(aug, inst.pair.backbone_vertices);
    CHECK(sg.graph.num_vertices() == 2 * aug.graph.num_vertices());
    for (VertexId v = 0; v < aug.graph.num_vertices(); ++v) {
      REQUIRE(sg.down[v] >= 0);
      CHECK(sg.graph.edge(sg.down[v]).tail == SplitGraph::node(v, 1));
      CHECK(sg.graph.edge(sg.down[v]).head == SplitGraph::node(v, 0));
      const bool on_b = v < aug.base_vertices && std::binary_search(inst.pair.backbone_vertices.begin(),
                                                                    inst.pair.backbone_vertices.end(), v);
      CHECK((sg.up[v] >= 0) == on_b);
    }
    for (EdgeId e = 0; e < aug.graph.num_edges(); ++e) {
      CHECK((sg.lower[e] >= 0) == (aug.edge_class[e] != EdgeClass::kBackward));
      CHECK((sg.upper[e] >= 0) == (aug.edge_class[e] != EdgeClass::kForward));
    }
  }
}

TEST_CASE("rerouting and rounding") {
  for (const auto& inst : instances()) {
    LevelStructure ls = build_level_structure(inst.pair);
    WitnessFlow wf = compute_witness_flow(inst, ls);
    AugmentedGraph aug = build_augmented_graph(inst, ls, wf);
    SplitCirculation circ = lift_and_reroute(inst, wf, aug);
    const Digraph& s = circ.split.graph;
    Rational cz, czb;
    std::vector<Rational> bal(s.num_vertices()), in(s.num_vertices());
    for (EdgeId e = 0; e < s.num_edges(); ++e) {
      CHECK(sgn(circ.z_bar[e]) >= 0);
      cz += circ.z[e] * s.edge(e).cost;
      czb += circ.z_bar[e] * s.edge(e).cost;
      bal[s.edge(e).tail] += circ.z_bar[e];
      bal[s.edge(e).head] -= circ.z_bar[e];
      in[s.edge(e).head] += circ.z_bar[e];
    }
    for (const auto& b : bal) CHECK(sgn(b) == 0);
    CHECK(czb <= cz);
    for (int i = 0; i < aug.k; ++i) {
      const int q = circ.q[i];
      REQUIRE((q == 0 || q == 1));
      // The chosen level takes half a unit, the other level none.
      CHECK(in[SplitGraph::node(aug.aux(i), 1)] == (q == 1 ? Rational(1, 2) : Rational(0)));
      // a_i^0 also receives the down edge; count only the other in-edges.
      const VertexId a0 = SplitGraph::node(aug.aux(i), 0);
      Rational in0 = 0;
      for (EdgeId e : s.in_edges(a0)) {
        if (e != circ.split.down[aug.aux(i)]) in0 += circ.z_bar[e];
      }
      CHECK(in0 == (q == 0 ? Rational(1, 2) : Rational(0)));
    }
    RoundedCover rc = round_circulation(inst, aug, circ);
    auto p = checks::rounding_problems(inst, aug, circ, rc);
    CHECK(p.empty());
    report(p);
    EdgeMultiset F = map_back(inst, aug, rc);
    auto q = checks::cover_problems(inst, F);
    CHECK(q.empty());
    report(q);
  }
}

TEST_CASE("subtour cover end to end") {
  int nonempty_h = 0;
  for (const auto& inst : instances()) {
    SubtourCoverStats st;
    EdgeMultiset F = subtour_cover(inst, &st);
    nonempty_h += !inst.H.empty();
    auto p = checks::cover_problems(inst, F);
    CHECK(p.empty());
    report(p);
    CHECK_NOTHROW(check_subtour_cover_solution(inst, F));
    CHECK(st.cost == F.cost(inst.pair.instance.graph()));
  }
  CHECK(nonempty_h > 0);

  SubtourCoverInstance tt = two_tri_instance();
  EdgeMultiset F = subtour_cover(tt);
  CHECK(checks::cover_problems(tt, F).empty());
}

TEST_CASE("cover leaves and enters a triangle component of H") {
  SubtourCoverInstance inst = triangle_h_instance();
  REQUIRE_NOTHROW(validate_subtour_cover_instance(inst));
  EdgeMultiset F = subtour_cover(inst);
  auto p = checks::cover_problems(inst, F);
  CHECK(p.empty());
  report(p);
  CHECK(F.count(6) >= 1);
  CHECK(F.count(7) >= 1);
}

TEST_CASE("cover checker rejects broken solutions") {
  for (const auto& inst : instances()) {
    if (inst.H.empty()) continue;
    EdgeMultiset none(inst.pair.instance.graph().num_edges());
    CHECK_FALSE(checks::cover_problems(inst, none).empty());
    CHECK_THROWS_AS(check_subtour_cover_solution(inst, none), InternalError);
    break;
  }
}
