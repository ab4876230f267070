#include <doctest.h>

#include "atsp/errors.hpp"
#include "atsp/generators.hpp"
#include "atsp/laminar.hpp"
#include "atsp/lp.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace atsp;

TEST_CASE("subtour LP on the small fixtures") {
  CHECK(solve_atsp_lp(fixture::c3()).first.objective == 3);
  CHECK(solve_atsp_lp(fixture::k2()).first.objective == 2);
  auto [p, d] = solve_atsp_lp(fixture::two_tri());
  CHECK(p.objective == 16);
  CHECK(d.objective == 16);
  CHECK(oracle::enumerate_subtour_lp(fixture::two_tri()).value == 16);
}

TEST_CASE("disconnected input is infeasible") {
  Digraph g(3);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 0, 1);
  g.add_edge(1, 2, 1);
  CHECK_THROWS_AS(solve_atsp_lp(g), InfeasibleInstance);
}

TEST_CASE("separation finds a violated set") {
  Digraph g = fixture::two_tri();
  PrimalLp x;
  x.x.assign(g.num_edges(), Rational(0));
  for (EdgeId e = 0; e < 6; ++e) x.x[e] = 1;
  auto U = separate_subtour(g, x);
  REQUIRE(U.has_value());
  CHECK(U == VertexSet{3, 4, 5});
  CHECK_FALSE(std::binary_search(U->begin(), U->end(), 0));
  x.x[6] = x.x[7] = 1;
  CHECK_FALSE(separate_subtour(g, x).has_value());
}

TEST_CASE("cutting planes match full cut enumeration on small instances") {
  for (GenModel model : all_models()) {
    for (int n = 2; n <= 7; ++n) {
      Digraph g = gen_instance(model, n, 40 + n);
      auto [p, d] = solve_atsp_lp(g);
      CAPTURE(model_name(model));
      CAPTURE(n);
      CHECK(p.objective == oracle::enumerate_subtour_lp(g).value);
      CHECK(oracle::min_cut_by_enumeration(g, p.x) >= 2);
      CHECK(d.objective == p.objective);
      CHECK(checks::dual_feasible(g, d));
    }
  }
}

TEST_CASE("dual pipeline keeps feasibility, objective and strong laminarity") {
  for (GenModel model : all_models()) {
    for (int n = 3; n <= 9; n += 2) {
      Digraph g = gen_instance(model, n, 7 * n);
      CAPTURE(model_name(model));
      CAPTURE(n);
      auto stages = checks::run_dual_pipeline(g);
      CHECK(stages.problems.empty());
      for (const auto& p : stages.problems) MESSAGE(p);
    }
  }
}

TEST_CASE("strongly laminar instance satisfies the structural conditions") {
  for (GenModel model : all_models()) {
    for (int n = 2; n <= 9; ++n) {
      Digraph g = gen_instance(model, n, 3 + n);
      LaminarBuild b = build_strongly_laminar_instance(g);
      CAPTURE(model_name(model));
      CAPTURE(n);
      auto problems = checks::strongly_laminar_problems(b.instance);
      CHECK(problems.empty());
      for (const auto& p : problems) MESSAGE(p);
      CHECK(b.lp_value == b.primal.objective);
      // Instance edges map to input edges with the same endpoints.
      for (EdgeId e = 0; e < b.instance.graph().num_edges(); ++e) {
        const Edge& a = b.instance.graph().edge(e);
        const Edge& o = g.edge(b.edge_origin[e]);
        CHECK(a.tail == o.tail);
        CHECK(a.head == o.head);
      }
    }
  }
}

TEST_CASE("uncrossing a crossing pair") {
  // Complete digraph on 4 vertices, unit costs, x = 1/3 everywhere; two
  // crossing sets carrying weight.
  Digraph g(4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a != b) g.add_edge(a, b, 1);
    }
  }
  DualLp d;
  d.a.assign(4, Rational(0));
  d.y[{0, 1}] = Rational(1, 4);
  d.y[{1, 2}] = Rational(1, 4);
  d.objective = 1;
  REQUIRE(dual_feasible(g, d));
  DualLp u = uncross_dual(g, d);
  std::vector<VertexSet> sets;
  for (auto& [U, w] : u.y) {
    sets.push_back(U);
    CHECK(sgn(w) > 0);
    CHECK_FALSE(std::binary_search(U.begin(), U.end(), 3));
  }
  CHECK(oracle::is_laminar(sets));
  CHECK(checks::dual_feasible(g, u));
  CHECK(checks::dual_value(u) == checks::dual_value(d));
}
