#include <doctest.h>

#include <algorithm>

#include "atsp/errors.hpp"
#include "atsp/generators.hpp"
#include "atsp/instance.hpp"
#include "atsp/lp.hpp"
#include "atsp/vertebrate.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace atsp;

namespace {

bool has(const VertexSet& s, VertexId v) { return std::binary_search(s.begin(), s.end(), v); }

}  // namespace

TEST_CASE("nice paths, crossing identity, value and D_W") {
  for (GenModel model : all_models()) {
    for (int n = 3; n <= 10; n += 2) {
      LaminarBuild b = build_strongly_laminar_instance(gen_instance(model, n, 100 + n));
      NicePathTable paths(b.instance);
      CAPTURE(model_name(model));
      CAPTURE(n);
      auto p = checks::nice_path_problems(b.instance, paths);
      CHECK(p.empty());
      for (const auto& s : p) MESSAGE(s);
    }
  }
}

TEST_CASE("visit_runs counts member visits") {
  LaminarBuild b = build_strongly_laminar_instance(fixture::two_tri());
  const auto& inst = b.instance;
  NicePathTable paths(inst);
  for (int i = 0; i < inst.family().size(); ++i) {
    for (VertexId u = 0; u < 6; ++u) {
      for (VertexId v = 0; v < 6; ++v) CHECK(visit_runs(inst, paths.path(u, v), u, i) <= 1);
    }
  }
}

TEST_CASE("backbone touches every nontrivial member it must") {
  LaminarBuild b = build_strongly_laminar_instance(gen_instance(GenModel::kTwoCluster, 9, 3));
  const auto& inst = b.instance;
  NicePathTable paths(inst);
  Backbone bb = construct_backbone(inst, paths, kWholeSet);
  CHECK(oracle::eulerian(inst.graph(), bb.edges.counts()));
  CHECK(bb.edges.cost(inst.graph()) <= 2 * bb.dw.dw);
  CHECK(has(bb.vertices, bb.dw.u));
  CHECK(has(bb.vertices, bb.dw.v));
  for (int L : bb.untouched) {
    for (VertexId v : inst.family().set(L)) CHECK_FALSE(has(bb.vertices, v));
  }
}

TEST_CASE("vertebrate pair validation") {
  LaminarBuild b = build_strongly_laminar_instance(fixture::two_tri());
  const auto& inst = b.instance;
  NicePathTable paths(inst);
  Backbone bb = construct_backbone(inst, paths, kWholeSet);
  VertebratePair ok{inst, bb.edges, bb.vertices};
  CHECK_NOTHROW(validate_vertebrate_pair(ok));
  Rational off;
  for (VertexId v = 0; v < inst.num_vertices(); ++v) {
    if (!has(bb.vertices, v)) off += 2 * inst.vertex_weight(v);
  }
  CHECK(offbackbone_weight(ok) == off);

  // Empty backbone with the family of TwoTri misses its triangles.
  VertebratePair bad{inst, EdgeMultiset(inst.graph().num_edges()), {1}};
  if (std::any_of(inst.family().sets().begin(), inst.family().sets().end(),
                  [](const VertexSet& s) { return s.size() >= 2 && !has(s, 1); })) {
    CHECK_THROWS_AS(validate_vertebrate_pair(bad), InternalError);
  }
}

TEST_CASE("solve_atsp returns a verified tour") {
  for (GenModel model : all_models()) {
    Digraph g = gen_instance(model, 8, 21);
    TourCertificate cert = solve_atsp(g, 1);
    CHECK(oracle::is_tour(g, cert.tour.counts()));
    CHECK(cert.cost == cert.tour.cost(g));
    CHECK(cert.cost <= 23 * cert.lp_value);
    CHECK(cert.walk.size() == static_cast<std::size_t>(cert.tour.total()));
  }
}

TEST_CASE("solve_atsp on tiny inputs") {
  Digraph one(1);
  TourCertificate c1 = solve_atsp(one, 1);
  CHECK(c1.cost == 0);
  CHECK(c1.ratio == 1);
  CHECK(c1.walk.empty());

  TourCertificate c3 = solve_atsp(fixture::c3(), 1);
  CHECK(c3.cost == 3);
  CHECK(c3.ratio == 1);

  TourCertificate k2 = solve_atsp(fixture::k2(), 1);
  CHECK(k2.cost == 2);

  CHECK_THROWS_AS(solve_atsp(fixture::c3(), 0), InputError);
}

TEST_CASE("zero-cost instances") {
  Digraph g(4);
  for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4, 0);
  g.add_edge(0, 2, 0);
  g.add_edge(2, 0, 0);
  TourCertificate c = solve_atsp(g, 1);
  CHECK(c.cost == 0);
  CHECK(c.lp_value == 0);
  CHECK(c.ratio == 1);
  CHECK(oracle::is_tour(g, c.tour.counts()));
}
