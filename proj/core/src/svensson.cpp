#include "atsp/svensson.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "atsp/check.hpp"
#include "atsp/errors.hpp"

namespace atsp {

namespace {

using Float = boost::multiprecision::cpp_bin_float_50;

Float to_float(const mpz_class& z) { return Float(z.get_str()); }

Float log_of(const Rational& q) {
  if (sgn(q) <= 0) return -std::numeric_limits<Float>::infinity();
  return log(to_float(q.get_num())) - log(to_float(q.get_den()));
}

Float log_sum_exp(const std::vector<Float>& xs) {
  Float hi = -std::numeric_limits<Float>::infinity();
  for (const Float& x : xs) hi = std::max(hi, x);
  if (isinf(hi)) return hi;
  Float s = 0;
  for (const Float& x : xs) {
    if (!isinf(x)) s += exp(x - hi);
  }
  return hi + log(s);
}

Float exponent_p(const Rational& eps_prime) {
  Float e = to_float(eps_prime.get_num()) / to_float(eps_prime.get_den());
  return log((2 + e) / e) / log(1 + e);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation("svensson: " + msg);
}

bool crosses_big_member(const LaminarFamily& fam, VertexId t, VertexId h) {
  for (int i = 0; i < fam.size(); ++i) {
    if (fam.set(i).size() >= 2 && fam.crosses(i, t, h)) return true;
  }
  return false;
}

// Components (with at least one edge) of (V, F).
struct Piece {
  VertexSet vertices;
  EdgeMultiset edges;
};

std::vector<Piece> pieces_of(const Digraph& g, const EdgeMultiset& F) {
  auto label = component_labels(g, F);
  std::vector<Piece> by_label(g.num_vertices());
  for (EdgeId e : F.support()) {
    Piece& p = by_label[label[g.edge(e).tail]];
    if (p.edges.universe() == 0) p.edges = EdgeMultiset(g.num_edges());
    p.edges.add(e, F.count(e));
  }
  std::vector<Piece> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (by_label[label[v]].edges.universe() != 0) by_label[label[v]].vertices.push_back(v);
  }
  for (auto& p : by_label) {
    if (p.edges.universe() != 0) out.push_back(std::move(p));
  }
  return out;  // label order is smallest-vertex order
}

std::vector<VertexSet> offbackbone_components(const VertebratePair& pair, const EdgeMultiset& H) {
  const Digraph& g = pair.instance.graph();
  auto label = component_labels(g, H);
  auto on_b = membership_mask(g.num_vertices(), pair.backbone_vertices);
  std::vector<VertexSet> groups(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (!on_b[v]) groups[label[v]].push_back(v);
  }
  std::vector<VertexSet> out;
  for (auto& s : groups) {
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

Float log_phi(const EllFunction& ell, const std::vector<VertexSet>& comps, const Float& p) {
  std::vector<Float> terms;
  for (const auto& W : comps) terms.push_back((1 + p) * log_of(ell.of(W)));
  return log_sum_exp(terms);
}

// H Eulerian, inside E[V \ V(B)] and crossing no member of size >= 2.
bool is_admissible(const VertebratePair& pair, const EdgeMultiset& H) {
  const Digraph& g = pair.instance.graph();
  const LaminarFamily& fam = pair.instance.family();
  auto on_b = membership_mask(g.num_vertices(), pair.backbone_vertices);
  if (!is_eulerian_connected(g, H).eulerian) return false;
  for (EdgeId e : H.support()) {
    const Edge& ed = g.edge(e);
    if (on_b[ed.tail] || on_b[ed.head] || crosses_big_member(fam, ed.tail, ed.head)) return false;
  }
  return true;
}

// Shortest paths from s by cost, over allowed edges only.
struct ShortestPaths {
  std::vector<Rational> dist;
  std::vector<char> reached;
  std::vector<EdgeId> pred;
};

ShortestPaths dijkstra(const Digraph& g, VertexId s, const std::vector<char>& allowed_edge) {
  const int n = g.num_vertices();
  ShortestPaths sp{std::vector<Rational>(n), std::vector<char>(n, 0), std::vector<EdgeId>(n, -1)};
  std::vector<char> done(n, 0);
  sp.reached[s] = 1;
  for (;;) {
    VertexId u = -1;
    for (VertexId v = 0; v < n; ++v) {
      if (sp.reached[v] && !done[v] && (u < 0 || sp.dist[v] < sp.dist[u])) u = v;
    }
    if (u < 0) break;
    done[u] = 1;
    for (EdgeId e : g.out_edges(u)) {
      if (!allowed_edge[e]) continue;
      VertexId h = g.edge(e).head;
      Rational d = sp.dist[u] + g.edge(e).cost;
      if (!sp.reached[h] || d < sp.dist[h]) {
        sp.reached[h] = 1;
        sp.dist[h] = d;
        sp.pred[h] = e;
      }
    }
  }
  return sp;
}

}  // namespace

EllFunction::EllFunction(const VertebratePair& pair, const SvenssonParams& params) : alpha_(params.alpha) {
  const StronglyLaminarInstance& I = pair.instance;
  const int n = I.num_vertices();
  require(sgn(params.epsilon) > 0, "epsilon must be positive");
  require(sgn(params.alpha) > 0, "alpha must be positive");
  require(!pair.backbone_vertices.empty(), "empty backbone vertex set");
  on_b_ = membership_mask(n, pair.backbone_vertices);
  off_ = offbackbone_weight(pair);
  eps_prime_ = params.epsilon / (3 + 4 * params.alpha + 1 / (2 * params.alpha));
  const Rational per_b = (params.kappa * I.lp_value() + params.beta * off_) / static_cast<long>(pair.backbone_vertices.size());
  ell_.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    if (on_b_[v]) {
      ell_[v] = per_b;
    } else {
      ell_[v] = (1 + eps_prime_) * 2 * params.alpha * 2 * I.vertex_weight(v) + eps_prime_ / n * off_;
    }
  }
  p_ = static_cast<double>(exponent_p(eps_prime_));
}

Rational EllFunction::of(const VertexSet& s) const {
  Rational t = 0;
  for (VertexId v : s) t += ell_[v];
  return t;
}

Rational EllFunction::backbone_total() const {
  Rational t = 0;
  for (int v = 0; v < n(); ++v) {
    if (on_b_[v]) t += ell_[v];
  }
  return t;
}

Rational EllFunction::offbackbone_total() const {
  Rational t = 0;
  for (int v = 0; v < n(); ++v) {
    if (!on_b_[v]) t += ell_[v];
  }
  return t;
}

Rational EllFunction::regularization() const {
  return eps_prime_ / (((1 + eps_prime_) * 2 * alpha_ + eps_prime_) * n());
}

std::vector<int> knapsack_greedy(const std::vector<KnapsackItem>& items, const Rational& limit) {
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& it : items) require(sgn(it.weight) > 0 && sgn(it.profit) >= 0, "bad knapsack item");
  // p_a / w_a > p_b / w_b without division; stable keeps input order on ties
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return items[a].profit * items[b].weight > items[b].profit * items[a].weight;
  });
  std::vector<int> taken;
  Rational used = 0;
  for (int j : order) {
    if (used + items[j].weight <= limit) {
      used += items[j].weight;
      taken.push_back(j);
    }
  }
  return taken;
}

int ComponentState::ind(const VertexSet& vs) const {
  int best = std::numeric_limits<int>::max();
  for (VertexId v : vs) best = std::min(best, index_of[v]);
  return best;
}

ComponentState make_component_state(const VertebratePair& pair, const EllFunction& ell, const EdgeMultiset& H_tilde) {
  ComponentState st;
  st.H_tilde = H_tilde;
  auto comps = offbackbone_components(pair, H_tilde);
  std::vector<Rational> vals;
  for (const auto& W : comps) vals.push_back(ell.of(W));
  std::vector<int> order(comps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });
  st.W.push_back(pair.backbone_vertices);
  st.ell_W.push_back(ell.of(pair.backbone_vertices));
  for (int j : order) {
    st.W.push_back(comps[j]);
    st.ell_W.push_back(vals[j]);
  }
  st.index_of.assign(pair.instance.num_vertices(), -1);
  for (int j = 0; j < static_cast<int>(st.W.size()); ++j) {
    for (VertexId v : st.W[j]) st.index_of[v] = j;
  }
  return st;
}

bool is_light(const Digraph& g, const EllFunction& ell, const EdgeMultiset& H) {
  for (const Piece& p : pieces_of(g, H)) {
    if (p.edges.cost(g) > ell.of(p.vertices)) return false;
  }
  return true;
}

double log_potential(const VertebratePair& pair, const EllFunction& ell, const EdgeMultiset& H) {
  Float p = exponent_p(ell.epsilon_prime());
  return static_cast<double>(log_phi(ell, offbackbone_components(pair, H), p));
}

EdgeMultiset improved_initialization(const VertebratePair& pair, const EllFunction& ell, const ComponentState& state,
                                     const EdgeMultiset& D_edges, const VertexSet& D_vertices,
                                     BetterInitRecord* record) {
  const Digraph& g = pair.instance.graph();
  const int n = g.num_vertices();
  const Rational& eps = ell.epsilon_prime();
  auto in_d = membership_mask(n, D_vertices);
  auto on_b = membership_mask(n, pair.backbone_vertices);

  // Preconditions.
  auto check = is_eulerian_connected(g, D_edges);
  require(check.eulerian, "D is not Eulerian");
  for (EdgeId e : D_edges.support()) require(in_d[g.edge(e).tail] && in_d[g.edge(e).head], "edge of D leaves V(D)");
  {
    auto label = component_labels(g, D_edges);
    for (VertexId v : D_vertices) require(label[v] == label[D_vertices.front()], "D is not connected");
  }
  for (VertexId v : D_vertices) require(!on_b[v], "D touches the backbone");
  require(is_admissible(pair, D_edges), "D crosses a member");
  const Rational ell_d = ell.of(D_vertices);
  const int i = state.ind(D_vertices);
  require(D_edges.cost(g) * (2 + eps) <= 2 * ell_d, "D is not cheap enough");
  require(ell_d > (1 + eps) * state.ell_W[i], "D is not large enough");

  std::vector<int> I;
  for (int j = 1; j <= state.k(); ++j) {
    bool hit = false;
    for (VertexId v : state.W[j]) hit = hit || in_d[v];
    if (hit) I.push_back(j);
  }
  std::vector<KnapsackItem> items;
  for (int j : I) {
    Rational w = 0, p = 0;
    for (VertexId v : state.W[j]) (in_d[v] ? w : p) += ell(v);
    items.push_back({w, p});
  }
  const Rational limit = eps / (2 + eps) * ell_d;
  std::vector<int> picked = knapsack_greedy(items, limit);
  std::vector<char> in_I(state.W.size(), 0), in_J(state.W.size(), 0);
  for (int j : I) in_I[j] = 1;
  // Items without profit add no vertices, only cost.
  for (int t : picked) {
    if (sgn(items[t].profit) > 0) in_J[I[t]] = 1;
  }

  EdgeMultiset out(g.num_edges());
  out.add_all(D_edges);
  for (EdgeId e : state.H_tilde.support()) {
    int j = state.index_of[g.edge(e).tail];
    if (!in_I[j] || in_J[j]) out.add(e, state.H_tilde.count(e));
  }

  VertexSet d_star = D_vertices;
  for (int j = 1; j <= state.k(); ++j) {
    if (in_J[j]) d_star.insert(d_star.end(), state.W[j].begin(), state.W[j].end());
  }
  d_star = make_vertex_set(d_star);

  const bool light = is_light(g, ell, out);
  ATSP_CHECK("better-init", is_admissible(pair, out), "new initialization is not Eulerian or crosses a member");
  ATSP_BOUND("better-init.light", light, "new initialization is not light");

  const Float p = exponent_p(eps);
  std::vector<Float> rhs{(1 + p) * log_of(state.ell_W[i])};
  for (int j : I) rhs.push_back((1 + p) * log_of(state.ell_W[j]));
  const bool growth = (1 + p) * log_of(ell.of(d_star)) > log_sum_exp(rhs);
  ATSP_BOUND("better-init.growth", growth, "merged component does not outgrow the replaced ones");

  std::vector<VertexSet> old_comps(state.W.begin() + 1, state.W.end());
  const Float before = log_phi(ell, old_comps, p);
  const Float after = log_phi(ell, offbackbone_components(pair, out), p);
  const Float step = (1 + p) * log_of(ell.regularization() * ell.offbackbone_total());
  const bool progress = after > log_sum_exp({before, step});
  ATSP_BOUND("better-init.potential", progress, "potential does not increase enough");

  if (record) {
    record->index = i;
    record->merged = static_cast<int>(std::count(in_J.begin(), in_J.end(), 1));
    record->light = light;
    record->log_phi_before = static_cast<double>(before);
    record->log_phi_after = static_cast<double>(after);
    record->log_phi_gain = static_cast<double>(Float(after - before));
    record->progress = progress && growth;
  }
  return out;
}

IterateResult svensson_iterate(const VertebratePair& pair, const EdgeMultiset& H_tilde, const EllFunction& ell,
                               const SvenssonParams& params, SvenssonTrace* trace) {
  const StronglyLaminarInstance& I = pair.instance;
  const Digraph& g = I.graph();
  const LaminarFamily& fam = I.family();
  const int n = g.num_vertices();
  const int m = g.num_edges();
  const Rational& eps = ell.epsilon_prime();
  require(H_tilde.universe() == m, "initialization over the wrong graph");
  require(is_admissible(pair, H_tilde), "initialization is not admissible");
  require(is_light(g, ell, H_tilde), "initialization is not light");

  const ComponentState st = make_component_state(pair, ell, H_tilde);
  auto on_b = membership_mask(n, pair.backbone_vertices);
  std::vector<char> allowed(m, 0);
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    allowed[e] = !on_b[ed.tail] && !on_b[ed.head] && !crosses_big_member(fam, ed.tail, ed.head);
  }
  const SubtourCoverAlgorithm cover =
      params.cover ? params.cover : SubtourCoverAlgorithm([](const SubtourCoverInstance& s) { return subtour_cover(s); });

  EdgeMultiset H = H_tilde;
  Rational x_ledger = 0, f_ledger = 0;
  std::set<int> marked;
  std::vector<char> f_added(st.W.size(), 0);
  const long cap = static_cast<long>(n) * std::max(m, 1) + n + 1;
  long steps = 0;
  auto with_backbone = [&](const EdgeMultiset& extra) {
    EdgeMultiset t = pair.backbone;
    t.add_all(extra);
    return t;
  };

  while (!is_eulerian_connected(g, with_backbone(H)).connected()) {
    ATSP_CHECK("svensson.loop", ++steps <= cap, "iteration cap exceeded");
    if (trace) ++trace->iterations;
    ATSP_CHECK("svensson.loop", is_admissible(pair, H), "H lost its structure");

    // (1) subtour cover, then drop pieces already inside a component.
    const EdgeMultiset F_prime = cover(SubtourCoverInstance{pair, H});
    if (trace) ++trace->cover_calls;
    {
      Rational backbone_part = 0;
      for (const Piece& p : pieces_of(g, F_prime)) {
        bool touches = false;
        for (VertexId v : p.vertices) touches = touches || on_b[v];
        if (touches) {
          backbone_part += p.edges.cost(g);
        } else {
          ATSP_BOUND("svensson.cover-light", p.edges.cost(g) * 2 * (1 + eps) <= ell.of(p.vertices),
                     "cover component away from the backbone is too expensive");
        }
      }
      ATSP_BOUND("svensson.cover-backbone", backbone_part <= ell.backbone_total(),
                 "backbone-touching cover components are too expensive");
    }
    const auto label_bh = component_labels(g, with_backbone(H));
    EdgeMultiset F(m);
    std::vector<Piece> pieces;
    for (Piece& p : pieces_of(g, F_prime)) {
      bool inside = true;
      for (VertexId v : p.vertices) inside = inside && label_bh[v] == label_bh[p.vertices.front()];
      if (inside) continue;
      F.add_all(p.edges);
      pieces.push_back(std::move(p));
    }

    // (2) better initialization.
    std::vector<int> piece_ind;
    std::vector<Rational> cost_by_ind(st.W.size());
    for (const Piece& p : pieces) {
      piece_ind.push_back(st.ind(p.vertices));
      cost_by_ind[piece_ind.back()] += p.edges.cost(g);
    }
    for (int i = 0; i <= st.k(); ++i) {
      if (cost_by_ind[i] <= st.ell_W[i]) continue;
      ATSP_CHECK("svensson.2a", i > 0, "backbone part of the cover exceeds its budget");
      EdgeMultiset D(m);
      VertexSet vs = st.W[i];
      for (EdgeId e : H_tilde.support()) {
        if (st.index_of[g.edge(e).tail] == i) D.add(e, H_tilde.count(e));
      }
      for (std::size_t t = 0; t < pieces.size(); ++t) {
        if (piece_ind[t] != i) continue;
        D.add_all(pieces[t].edges);
        vs.insert(vs.end(), pieces[t].vertices.begin(), pieces[t].vertices.end());
      }
      BetterInitRecord rec;
      rec.rule = "2a";
      EdgeMultiset better = improved_initialization(pair, ell, st, D, make_vertex_set(vs), &rec);
      if (trace) trace->better_inits.push_back(rec);
      return {false, better};
    }
    for (std::size_t t = 0; t < pieces.size(); ++t) {
      const int i = piece_ind[t];
      if (i == 0 || ell.of(pieces[t].vertices) <= (1 + eps) * st.ell_W[i]) continue;
      BetterInitRecord rec;
      rec.rule = "2b";
      EdgeMultiset better = improved_initialization(pair, ell, st, pieces[t].edges, pieces[t].vertices, &rec);
      if (trace) trace->better_inits.push_back(rec);
      return {false, better};
    }

    // (3) extend H.
    EdgeMultiset X(m);
    std::vector<std::pair<int, std::vector<EdgeId>>> cycles;
    std::vector<char> in_z;
    for (;;) {
      ATSP_CHECK("svensson.loop", ++steps <= cap, "iteration cap exceeded");
      EdgeMultiset all = with_backbone(H);
      all.add_all(F);
      all.add_all(X);
      auto label = component_labels(g, all);
      std::vector<int> ind(n, std::numeric_limits<int>::max());
      for (VertexId v = 0; v < n; ++v) ind[label[v]] = std::min(ind[label[v]], st.index_of[v]);
      int z = -1;
      for (VertexId v = 0; v < n; ++v) {
        if (label[v] == v && (z < 0 || ind[v] > ind[z])) z = v;
      }
      in_z.assign(n, 0);
      for (VertexId v = 0; v < n; ++v) in_z[v] = label[v] == z;
      const Rational budget = st.ell_W[ind[z]] / (2 * params.alpha);

      std::vector<EdgeId> found;
      std::vector<std::optional<ShortestPaths>> cache(n);
      for (EdgeId e = 0; e < m && found.empty(); ++e) {
        const Edge& ed = g.edge(e);
        if (!allowed[e] || !in_z[ed.tail] || in_z[ed.head]) continue;
        if (!cache[ed.head]) cache[ed.head] = dijkstra(g, ed.head, allowed);
        const ShortestPaths& sp = *cache[ed.head];
        if (!sp.reached[ed.tail] || ed.cost + sp.dist[ed.tail] > budget) continue;
        found.push_back(e);
        for (VertexId v = ed.tail; v != ed.head; v = g.edge(sp.pred[v]).tail) found.push_back(sp.pred[v]);
      }
      if (found.empty()) break;
      Rational c = 0;
      VertexSet cv;
      for (EdgeId e : found) {
        X.add(e);
        c += g.edge(e).cost;
        cv.push_back(g.edge(e).tail);
      }
      ATSP_BOUND("svensson.cycle", c * 2 * params.alpha * (1 + eps) <= ell.of(make_vertex_set(cv)),
                 "cheap cycle is heavier than its vertices allow");
      cycles.emplace_back(ind[z], std::move(found));
      if (trace) ++trace->cycles;
    }

    // (3d) keep what lies in Z.
    std::set<int> f_here;
    for (std::size_t t = 0; t < pieces.size(); ++t) {
      if (!in_z[pieces[t].vertices.front()]) continue;
      H.add_all(pieces[t].edges);
      f_ledger += pieces[t].edges.cost(g);
      f_here.insert(piece_ind[t]);
    }
    for (int i : f_here) {
      ATSP_CHECK("svensson.f-once", !f_added[i], "cover part of one index added twice");
      f_added[i] = 1;
    }
    for (const auto& [mark, cyc] : cycles) {
      if (!in_z[g.edge(cyc.front()).tail]) continue;
      ATSP_CHECK("svensson.x-once", marked.insert(mark).second, "two cycles mark the same index");
      for (EdgeId e : cyc) {
        H.add(e);
        x_ledger += g.edge(e).cost;
      }
    }
  }

  EdgeMultiset tour = with_backbone(H);
  auto final_check = is_eulerian_connected(g, tour);
  ATSP_CHECK("svensson.solution", final_check.eulerian && final_check.connected(), "backbone plus H is not a tour");
  const Rational off = ell.offbackbone_total();
  const Rational x_bound = off / (2 * params.alpha);
  const Rational f_bound = ell.backbone_total() + off;
  const Rational bound = ell.backbone_total() + (2 + 1 / (2 * params.alpha)) * off;
  ATSP_BOUND("svensson.x-ledger", x_ledger <= x_bound, "cycle edges cost too much");
  ATSP_BOUND("svensson.f-ledger", f_ledger <= f_bound, "cover edges cost too much");
  ATSP_BOUND("svensson.solution-cost", H.cost(g) <= bound, "solution exceeds its ell budget");
  if (trace) {
    trace->cost_H = H.cost(g);
    trace->bound_H = bound;
    trace->x_ledger = x_ledger;
    trace->x_bound = x_bound;
    trace->f_ledger = f_ledger;
    trace->f_bound = f_bound;
  }
  return {true, H};
}

EdgeMultiset vertebrate_solve(const VertebratePair& pair, const SvenssonParams& params, SvenssonTrace* trace) {
  validate_vertebrate_pair(pair);
  const Digraph& g = pair.instance.graph();
  EllFunction ell(pair, params);
  EdgeMultiset H_tilde(g.num_edges());
  std::vector<double> phis;
  EdgeMultiset F;
  for (long restarts = 0;; ++restarts) {
    if (restarts > params.restart_cap) {
      std::ostringstream msg;
      msg << "restart cap exceeded; log potential trace:";
      for (double v : phis) msg << ' ' << v;
      ATSP_CHECK("svensson.restarts", false, msg.str());
    }
    phis.push_back(log_potential(pair, ell, H_tilde));
    IterateResult r = svensson_iterate(pair, H_tilde, ell, params, trace);
    if (r.solved) {
      F = std::move(r.H);
      break;
    }
    H_tilde = std::move(r.H);
    if (trace) ++trace->restarts;
  }
  const Rational eta = 4 * params.alpha + params.beta + 1 + params.epsilon;
  const Rational bound = params.kappa * pair.instance.lp_value() + eta * offbackbone_weight(pair);
  ATSP_BOUND("svensson.final", F.cost(g) <= bound, "vertebrate solution exceeds kappa LP + eta sum 2y_v");
  if (trace) {
    trace->cost_final = F.cost(g);
    trace->bound_final = bound;
  }
  return F;
}

EdgeMultiset vertebrate_solve(const VertebratePair& pair, const Rational& epsilon) {
  SvenssonParams params;
  params.epsilon = epsilon;
  return vertebrate_solve(pair, params);
}

}  // namespace atsp
