#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace oracle {

DenseResult bland_minimize(const DenseLp& lp) {
  const int m = static_cast<int>(lp.rows.size());
  const int n = static_cast<int>(lp.c.size());
  int ns = 0;
  for (auto s : lp.sense) ns += s != DenseLp::kEq;
  const int art0 = n + ns;
  const int total = art0 + m;
  std::vector<std::vector<Rational>> T(m, std::vector<Rational>(total));
  std::vector<Rational> b(m);
  std::vector<int> basis(m);
  int slack = n;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) T[i][j] = lp.rows[i][j];
    if (lp.sense[i] == DenseLp::kGe) T[i][slack++] = -1;
    if (lp.sense[i] == DenseLp::kLe) T[i][slack++] = 1;
    b[i] = lp.rhs[i];
    if (sgn(b[i]) < 0) {
      for (auto& v : T[i]) v = -v;
      b[i] = -b[i];
    }
    T[i][art0 + i] = 1;
    basis[i] = art0 + i;
  }

  std::vector<Rational> d(total);
  Rational z;
  auto pivot = [&](int r, int col) {
    const Rational p = T[r][col];
    for (auto& v : T[r]) v /= p;
    b[r] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || sgn(T[i][col]) == 0) continue;
      const Rational f = T[i][col];
      for (int j = 0; j < total; ++j) {
        if (sgn(T[r][j]) != 0) T[i][j] -= f * T[r][j];
      }
      b[i] -= f * b[r];
    }
    if (sgn(d[col]) != 0) {
      const Rational f = d[col];
      for (int j = 0; j < total; ++j) {
        if (sgn(T[r][j]) != 0) d[j] -= f * T[r][j];
      }
      z += f * b[r];
    }
    basis[r] = col;
  };
  // Bland: lowest-index improving column, lowest-index basic variable on ties.
  auto run = [&](int allowed) {
    for (;;) {
      int col = -1;
      for (int j = 0; j < allowed; ++j) {
        if (sgn(d[j]) < 0) {
          col = j;
          break;
        }
      }
      if (col < 0) return true;
      int r = -1;
      Rational best;
      for (int i = 0; i < m; ++i) {
        if (sgn(T[i][col]) <= 0) continue;
        Rational ratio = b[i] / T[i][col];
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, col);
    }
  };

  // Phase one: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < art0; ++j) d[j] -= T[i][j];
    z += b[i];
  }
  run(total);
  DenseResult out;
  if (sgn(z) != 0) return out;
  for (int i = 0; i < m; ++i) {
    if (basis[i] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (sgn(T[i][j]) != 0) {
        pivot(i, j);
        break;
      }
    }
  }

  // Phase two.
  std::vector<Rational> cost(total);
  for (int j = 0; j < n; ++j) cost[j] = lp.c[j];
  d = cost;
  z = 0;
  for (int i = 0; i < m; ++i) {
    const Rational& cb = cost[basis[i]];
    if (sgn(cb) == 0) continue;
    for (int j = 0; j < total; ++j) d[j] -= cb * T[i][j];
    z += cb * b[i];
  }
  if (!run(art0)) throw std::runtime_error("bland_minimize: unbounded");
  out.feasible = true;
  out.value = z;
  out.x.assign(n, Rational(0));
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = b[i];
  }
  return out;
}

SubtourLp enumerate_subtour_lp(const Digraph& g) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (n > 16) throw std::invalid_argument("enumerate_subtour_lp: n too large");
  DenseLp lp;
  for (const auto& e : g.edges()) lp.c.push_back(e.cost);
  for (VertexId v = 0; v < n; ++v) {
    std::vector<Rational> row(m);
    for (EdgeId e : g.out_edges(v)) row[e] += 1;
    for (EdgeId e : g.in_edges(v)) row[e] -= 1;
    lp.add(std::move(row), DenseLp::kEq, 0);
  }
  auto cut_row = [&](std::uint32_t mask) {
    std::vector<Rational> row(m);
    for (EdgeId e = 0; e < m; ++e) {
      const bool t = (mask >> g.edge(e).tail) & 1U, h = (mask >> g.edge(e).head) & 1U;
      if (t && !h) row[e] = 1;
    }
    return row;
  };
  for (VertexId v = 0; v < n && n > 1; ++v) lp.add(cut_row(1U << v), DenseLp::kGe, 1);

  SubtourLp out;
  const std::uint32_t full = (1U << n) - 1;
  for (;;) {
    ++out.rounds;
    DenseResult r = bland_minimize(lp);
    if (!r.feasible) throw std::runtime_error("enumerate_subtour_lp: infeasible");
    std::vector<std::pair<Rational, std::uint32_t>> violated;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      Rational out_flow;
      for (EdgeId e = 0; e < m; ++e) {
        const bool t = (mask >> g.edge(e).tail) & 1U, h = (mask >> g.edge(e).head) & 1U;
        if (t && !h) out_flow += r.x[e];
      }
      if (out_flow < 1) violated.emplace_back(out_flow, mask);
    }
    if (violated.empty()) {
      out.value = r.value;
      out.x = r.x;
      return out;
    }
    std::sort(violated.begin(), violated.end());
    const std::size_t take = std::min<std::size_t>(violated.size(), static_cast<std::size_t>(2 * n));
    for (std::size_t k = 0; k < take; ++k) lp.add(cut_row(violated[k].second), DenseLp::kGe, 1);
  }
}

Rational min_cut_by_enumeration(const Digraph& g, const std::vector<Rational>& x) {
  const int n = g.num_vertices();
  const std::uint32_t full = (1U << n) - 1;
  std::optional<Rational> best;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    Rational v;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const bool t = (mask >> g.edge(e).tail) & 1U, h = (mask >> g.edge(e).head) & 1U;
      if (t != h) v += x[e];
    }
    if (!best || v < *best) best = v;
  }
  return best.value_or(Rational(0));
}

std::vector<std::vector<std::optional<Rational>>> floyd_warshall(const Digraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<std::optional<Rational>>> d(n, std::vector<std::optional<Rational>>(n));
  for (VertexId v = 0; v < n; ++v) d[v][v] = Rational(0);
  for (const auto& e : g.edges()) {
    if (!d[e.tail][e.head] || e.cost < *d[e.tail][e.head]) d[e.tail][e.head] = e.cost;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!d[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (!d[k][j]) continue;
        Rational via = *d[i][k] + *d[k][j];
        if (!d[i][j] || via < *d[i][j]) d[i][j] = via;
      }
    }
  }
  return d;
}

Rational brute_force_atsp(const Digraph& g) {
  const int n = g.num_vertices();
  if (n > 9) throw std::invalid_argument("brute_force_atsp: n too large");
  if (n <= 1) return 0;
  auto d = floyd_warshall(g);
  std::vector<int> order(n - 1);
  std::iota(order.begin(), order.end(), 1);
  std::optional<Rational> best;
  do {
    Rational c = *d[0][order.front()] + *d[order.back()][0];
    for (int i = 0; i + 1 < n - 1; ++i) c += *d[order[i]][order[i + 1]];
    if (!best || c < *best) best = c;
  } while (std::next_permutation(order.begin(), order.end()));
  return *best;
}

Rational knapsack_exhaustive(const std::vector<Rational>& w, const std::vector<Rational>& p, const Rational& limit) {
  // Walk all subsets in Gray-code order so each step flips one item.
  const int k = static_cast<int>(w.size());
  Rational best = 0, tw = 0, tp = 0;
  std::uint32_t cur = 0;
  for (std::uint32_t i = 1; i < (1U << k); ++i) {
    const std::uint32_t next = i ^ (i >> 1);
    const int j = std::countr_zero(cur ^ next);
    if ((next >> j) & 1U) {
      tw += w[j];
      tp += p[j];
    } else {
      tw -= w[j];
      tp -= p[j];
    }
    cur = next;
    if (tp > best && tw <= limit) best = tp;
  }
  return best;
}

bool is_laminar(const std::vector<VertexSet>& sets) {
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      VertexSet inter;
      std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                            std::back_inserter(inter));
      if (!inter.empty() && inter.size() != sets[a].size() && inter.size() != sets[b].size()) return false;
    }
  }
  return true;
}

bool strongly_connected_on(const Digraph& g, const VertexSet& s) {
  if (s.empty()) return false;
  std::vector<char> in(g.num_vertices(), 0);
  for (VertexId v : s) in[v] = 1;
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<char> seen(g.num_vertices(), 0);
    std::vector<VertexId> stack{s.front()};
    seen[s.front()] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      const auto& adj = dir == 0 ? g.out_edges(v) : g.in_edges(v);
      for (EdgeId e : adj) {
        VertexId w = dir == 0 ? g.edge(e).head : g.edge(e).tail;
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (VertexId v : s) {
      if (!seen[v]) return false;
    }
  }
  return true;
}

std::vector<int> weak_components(const Digraph& g, const std::vector<std::int64_t>& count, int* num) {
  const int n = g.num_vertices();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (count[e] > 0) parent[find(g.edge(e).tail)] = find(g.edge(e).head);
  }
  std::vector<int> label(n, -1), id(n, -1);
  int k = 0;
  for (VertexId v = 0; v < n; ++v) {
    int r = find(v);
    if (id[r] < 0) id[r] = k++;
    label[v] = id[r];
  }
  if (num) *num = k;
  return label;
}

bool eulerian(const Digraph& g, const std::vector<std::int64_t>& count) {
  const int n = g.num_vertices();
  std::vector<std::int64_t> bal(n), deg(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (count[e] < 0) return false;
    bal[g.edge(e).tail] += count[e];
    bal[g.edge(e).head] -= count[e];
    deg[g.edge(e).tail] += count[e];
    deg[g.edge(e).head] += count[e];
  }
  for (VertexId v = 0; v < n; ++v) {
    if (bal[v] != 0) return false;
  }
  return true;
}

bool is_tour(const Digraph& g, const std::vector<std::int64_t>& count) {
  const int n = g.num_vertices();
  if (!eulerian(g, count)) return false;
  if (n == 1) return true;
  std::vector<std::int64_t> deg(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    deg[g.edge(e).tail] += count[e];
    deg[g.edge(e).head] += count[e];
  }
  for (VertexId v = 0; v < n; ++v) {
    if (deg[v] == 0) return false;
  }
  int k = 0;
  weak_components(g, count, &k);
  return k == 1;
}

Rational crossing_cost(const atsp::StronglyLaminarInstance& inst, VertexId t, VertexId h) {
  const auto& fam = inst.family();
  Rational c;
  for (int i = 0; i < fam.size(); ++i) {
    const VertexSet& s = fam.set(i);
    const bool a = std::binary_search(s.begin(), s.end(), t);
    const bool b = std::binary_search(s.begin(), s.end(), h);
    if (a != b) c += fam.weight(i);
  }
  return c;
}

}  // namespace oracle
