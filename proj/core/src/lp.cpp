#include "atsp/lp.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "atsp/check.hpp"
#include "atsp/errors.hpp"
#include "atsp/flow.hpp"
#include "atsp/simplex.hpp"

namespace atsp {

namespace {

std::vector<LpTerm> cut_terms(const Digraph& g, const VertexSet& U) {
  std::vector<char> in = membership_mask(g.num_vertices(), U);
  std::vector<LpTerm> terms;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (in[g.edge(e).tail] != in[g.edge(e).head]) terms.push_back({e, Rational(1)});
  }
  return terms;
}

VertexSet side_without(int n, const std::vector<char>& side, VertexId root) {
  VertexSet s;
  for (VertexId v = 0; v < n; ++v) {
    if (static_cast<bool>(side[v]) != static_cast<bool>(side[root])) s.push_back(v);
  }
  return s;
}

VertexSet canonical(int n, const VertexSet& U, VertexId root) {
  return std::binary_search(U.begin(), U.end(), root) ? complement(n, U) : U;
}

std::string describe(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace

std::vector<VertexSet> separate_all(const Digraph& g, const std::vector<Rational>& x) {
  const int n = g.num_vertices();
  std::vector<VertexSet> found;
  std::set<VertexSet> seen;
  for (VertexId t = 1; t < n; ++t) {
    for (int dir = 0; dir < 2; ++dir) {
      MaxFlow mf(n);
      for (EdgeId e = 0; e < g.num_edges(); ++e) mf.add_arc(g.edge(e).tail, g.edge(e).head, x[e]);
      Rational value = dir == 0 ? mf.run(0, t) : mf.run(t, 0);
      if (value >= 1) continue;
      // Source side of the residual graph; report the side without vertex 0.
      VertexSet U = side_without(n, mf.source_side(), 0);
      if (seen.insert(U).second) found.push_back(std::move(U));
    }
  }
  return found;
}

std::optional<VertexSet> separate_subtour(const Digraph& g, const PrimalLp& x) {
  if (g.num_vertices() < 2) return std::nullopt;
  auto all = separate_all(g, x.x);
  if (all.empty()) return std::nullopt;
  return all.front();
}

Rational dual_load(const Digraph& g, const DualLp& dual, EdgeId e) {
  const Edge& ed = g.edge(e);
  Rational load = dual.a[ed.head] - dual.a[ed.tail];
  for (const auto& [U, w] : dual.y) {
    bool t = std::binary_search(U.begin(), U.end(), ed.tail);
    bool h = std::binary_search(U.begin(), U.end(), ed.head);
    if (t != h) load += w;
  }
  return load;
}

bool dual_feasible(const Digraph& g, const DualLp& dual) {
  for (const auto& [U, w] : dual.y) {
    if (sgn(w) < 0) return false;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (dual_load(g, dual, e) > g.edge(e).cost) return false;
  }
  return true;
}

Rational dual_objective(const DualLp& dual) {
  Rational total = 0;
  for (const auto& [U, w] : dual.y) total += 2 * w;
  return total;
}

std::pair<PrimalLp, DualLp> solve_atsp_lp(const Digraph& g, LpStats* stats) {
  const int n = g.num_vertices();
  if (n < 2) throw ContractViolation("solve_atsp_lp needs at least two vertices");
  if (!is_strongly_connected(g)) throw InfeasibleInstance("graph is not strongly connected");

  std::vector<Rational> costs(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) costs[e] = g.edge(e).cost;
  ExactSimplex lp(costs);
  // Conservation rows; the row of vertex n-1 is implied and omitted.
  for (VertexId v = 0; v + 1 < n; ++v) {
    std::vector<LpTerm> terms;
    for (EdgeId e : g.in_edges(v)) terms.push_back({e, Rational(1)});
    for (EdgeId e : g.out_edges(v)) terms.push_back({e, Rational(-1)});
    lp.add_row(terms, RowSense::kEqual, Rational(0));
  }
  std::vector<VertexSet> cuts;
  std::set<VertexSet> cut_set;
  for (VertexId v = 0; v < n; ++v) {
    VertexSet U{v};
    lp.add_row(cut_terms(g, U), RowSense::kGreaterEqual, Rational(2));
    cuts.push_back(U);
    cut_set.insert(U);
  }
  LpStats local;
  while (true) {
    ++local.rounds;
    LpStatus st = lp.solve();
    if (st != LpStatus::kOptimal) throw InternalError("lp", "relaxation not optimal on a strongly connected graph");
    std::vector<Rational> x = lp.primal();
    auto violated = separate_all(g, x);
    int added = 0;
    for (auto& U : violated) {
      if (!cut_set.insert(U).second) {
        throw InternalError("lp", "separation returned an already enforced cut " + describe(U));
      }
      lp.add_row(cut_terms(g, U), RowSense::kGreaterEqual, Rational(2));
      cuts.push_back(U);
      ++added;
    }
    if (added == 0) break;
  }
  local.cuts = static_cast<int>(cuts.size());
  local.pivots = lp.pivots();
  if (stats) *stats = local;

  PrimalLp primal{lp.primal(), lp.objective()};
  std::vector<Rational> mult = lp.duals();
  DualLp dual;
  dual.a.assign(n, Rational(0));
  for (VertexId v = 0; v + 1 < n; ++v) dual.a[v] = mult[v];
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const Rational& w = mult[n - 1 + k];
    ATSP_CHECK("lp", sgn(w) >= 0, "negative cut multiplier");
    if (sgn(w) > 0) dual.y[cuts[k]] += w;
  }
  dual.objective = dual_objective(dual);
  ATSP_CHECK("lp", dual_feasible(g, dual), "extracted dual is infeasible");
  ATSP_CHECK("lp", dual.objective == primal.objective, "strong duality fails");
  return {std::move(primal), std::move(dual)};
}

DualLp uncross_dual(const Digraph& g, const DualLp& dual) {
  const int n = g.num_vertices();
  const VertexId root = n - 1;
  DualLp out;
  out.a = dual.a;
  for (const auto& [U, w] : dual.y) {
    if (sgn(w) == 0) continue;
    out.y[canonical(n, U, root)] += w;
  }
  const Rational objective = dual_objective(dual);
  const long cap = 8L * n * n * std::max<long>(1, static_cast<long>(dual.y.size()));
  long steps = 0;
  while (true) {
    const VertexSet* A = nullptr;
    const VertexSet* B = nullptr;
    for (auto i = out.y.begin(); i != out.y.end() && !A; ++i) {
      for (auto j = std::next(i); j != out.y.end(); ++j) {
        if (intersects(i->first, j->first) && !is_subset(i->first, j->first) && !is_subset(j->first, i->first)) {
          A = &i->first;
          B = &j->first;
          break;
        }
      }
    }
    if (!A) break;
    if (++steps > cap) {
      throw InternalError("uncross", "iteration cap " + std::to_string(cap) + " exceeded with " +
                                         std::to_string(out.y.size()) + " support sets");
    }
    VertexSet a = *A, b = *B;
    Rational eps = min_of(out.y[a], out.y[b]);
    VertexSet meet = set_intersection(a, b);
    VertexSet join = set_union(a, b);
    for (const VertexSet* s : {&a, &b}) {
      Rational& w = out.y[*s];
      w -= eps;
      if (sgn(w) == 0) out.y.erase(*s);
    }
    out.y[meet] += eps;
    out.y[join] += eps;
    ATSP_BOUND("uncross", dual_objective(out) == objective, "uncrossing changed the objective");
  }
  out.objective = dual_objective(out);
  std::vector<VertexSet> support;
  for (const auto& [U, w] : out.y) support.push_back(U);
  ATSP_CHECK("uncross", check_laminar(support), "support not laminar after uncrossing");
  ATSP_CHECK("uncross", dual_feasible(g, out), "uncrossed dual is infeasible");
  ATSP_CHECK("uncross", out.objective == objective, "uncrossing changed the objective");
  return out;
}

DualLp make_strongly_laminar(const Digraph& g, const PrimalLp& x, const DualLp& dual) {
  (void)x;
  const int n = g.num_vertices();
  DualLp out = dual;
  const Rational objective = dual_objective(dual);
  for (int iter = 0;; ++iter) {
    ATSP_CHECK("strongly-laminar", iter <= 2 * n, "loop exceeded 2n iterations");
    // Smallest bad set; a smallest one has no bad proper subset.
    const VertexSet* bad = nullptr;
    std::vector<VertexSet> bad_sccs;
    for (const auto& [U, w] : out.y) {
      if (bad && U.size() >= bad->size()) continue;
      auto sccs = scc_topological(g, U);
      if (sccs.size() > 1) {
        bad = &U;
        bad_sccs = std::move(sccs);
      }
    }
    if (!bad) break;
    VertexSet U = *bad;
    const VertexSet& S = bad_sccs.front();
    Rational yu = out.y[U];
    out.y.erase(U);
    out.y[S] += yu;
    for (VertexId v : set_difference(U, S)) out.a[v] -= yu;
    ATSP_BOUND("strongly-laminar", dual_feasible(g, out), "shifted dual is infeasible");
    ATSP_BOUND("strongly-laminar", dual_objective(out) == objective, "objective changed");
  }
  out.objective = dual_objective(out);
  std::vector<VertexSet> support;
  for (const auto& [U, w] : out.y) {
    support.push_back(U);
    ATSP_CHECK("strongly-laminar", is_strongly_connected(g, U), "support set not strongly connected");
  }
  ATSP_CHECK("strongly-laminar", check_laminar(support), "support not laminar");
  ATSP_CHECK("strongly-laminar", dual_feasible(g, out), "dual infeasible");
  ATSP_CHECK("strongly-laminar", out.objective == objective, "objective changed");
  (void)n;
  return out;
}

LaminarBuild build_strongly_laminar_instance(const Digraph& g) {
  const int n = g.num_vertices();
  LaminarBuild out;
  if (n == 1) {
    out.instance = StronglyLaminarInstance(Digraph(1), LaminarFamily(1, {}, {}), {});
    out.lp_value = 0;
    out.primal.objective = 0;
    out.dual.a.assign(1, Rational(0));
    return out;
  }
  auto [primal, dual] = solve_atsp_lp(g, &out.stats);

  // Restrict to the support of x.
  Digraph support(n);
  std::vector<Rational> xs;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (sgn(primal.x[e]) > 0) {
      support.add_edge(g.edge(e).tail, g.edge(e).head, g.edge(e).cost);
      xs.push_back(primal.x[e]);
      out.edge_origin.push_back(e);
    }
  }
  PrimalLp px{xs, primal.objective};
  ATSP_CHECK("lp", dual_feasible(support, dual), "dual infeasible on the support graph");

  DualLp laminar = uncross_dual(support, dual);
  DualLp strong = make_strongly_laminar(support, px, laminar);

  std::vector<VertexSet> sets;
  std::vector<Rational> weights;
  for (const auto& [U, w] : strong.y) {
    ATSP_CHECK("lp", cut_value(support, xs, membership_mask(n, U)) == 2,
               "complementary slackness fails on a support set");
    sets.push_back(U);
    weights.push_back(w);
  }
  for (EdgeId e = 0; e < support.num_edges(); ++e) {
    ATSP_CHECK("lp", dual_load(support, strong, e) == support.edge(e).cost,
               "complementary slackness fails on a support edge");
  }
  StronglyLaminarInstance inst(support, LaminarFamily(n, sets, weights), xs);
  for (EdgeId e = 0; e < support.num_edges(); ++e) {
    const Edge& ed = support.edge(e);
    ATSP_CHECK("lp", inst.cost(e) == ed.cost + strong.a[ed.tail] - strong.a[ed.head],
               "induced cost differs from the reduced cost");
  }
  validate_strongly_laminar(inst);
  ATSP_CHECK("lp", inst.lp_value() == primal.objective, "instance LP value differs from the LP optimum");
  out.lp_value = primal.objective;
  out.instance = std::move(inst);
  out.primal = std::move(primal);
  out.dual = std::move(strong);
  return out;
}

}  // namespace atsp
