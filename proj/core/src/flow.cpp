#include "atsp/flow.hpp"

#include <deque>

#include "atsp/errors.hpp"

namespace atsp {

MaxFlow::MaxFlow(int n) : n_(n), adj_(n) {}

int MaxFlow::add_arc(int from, int to, Rational capacity) {
  int id = static_cast<int>(arcs_.size()) / 2;
  adj_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, capacity, capacity});
  adj_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, Rational(0), Rational(0)});
  return id;
}

Rational MaxFlow::run(int s, int t) {
  Rational total = 0;
  while (true) {
    std::vector<int> via(n_, -1);
    reach_.assign(n_, 0);
    reach_[s] = 1;
    std::deque<int> queue{s};
    while (!queue.empty() && !reach_[t]) {
      int v = queue.front();
      queue.pop_front();
      for (int a : adj_[v]) {
        int w = arcs_[a].to;
        if (reach_[w] || sgn(arcs_[a].residual) <= 0) continue;
        reach_[w] = 1;
        via[w] = a;
        queue.push_back(w);
      }
    }
    if (!reach_[t]) break;
    Rational push = arcs_[via[t]].residual;
    for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) push = min_of(push, arcs_[via[v]].residual);
    for (int v = t; v != s; v = arcs_[via[v] ^ 1].to) {
      arcs_[via[v]].residual -= push;
      arcs_[via[v] ^ 1].residual += push;
    }
    total += push;
  }
  return total;
}

Rational MaxFlow::flow(int arc) const {
  return arcs_[2 * arc].capacity - arcs_[2 * arc].residual;
}

MinCostCirculation::MinCostCirculation(int n) : n_(n) {}

int MinCostCirculation::add_node() { return n_++; }

int MinCostCirculation::add_arc(int from, int to, Rational lower, Rational upper, Rational cost) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) throw ContractViolation("circulation: bad node");
  if (lower > upper) throw ContractViolation("circulation: lower bound above upper bound");
  if (sgn(cost) < 0) throw ContractViolation("circulation: negative cost");
  from_.push_back(from);
  to_.push_back(to);
  lower_.push_back(std::move(lower));
  upper_.push_back(std::move(upper));
  cost_.push_back(std::move(cost));
  flow_.emplace_back(0);
  return static_cast<int>(from_.size()) - 1;
}

namespace {

struct ResidualArc {
  int to;
  Rational cap;
  Rational cost;
  int twin;
  int origin;  // arc id, or -1 for supply/demand arcs
};

}  // namespace

bool MinCostCirculation::solve() {
  const int S = n_;
  const int T = n_ + 1;
  const int N = n_ + 2;
  std::vector<std::vector<ResidualArc>> g(N);
  auto link = [&](int a, int b, const Rational& cap, const Rational& cost, int origin) {
    g[a].push_back({b, cap, cost, static_cast<int>(g[b].size()), origin});
    g[b].push_back({a, Rational(0), -cost, static_cast<int>(g[a].size()) - 1, -1});
  };
  std::vector<Rational> excess(n_);
  for (int k = 0; k < num_arcs(); ++k) {
    excess[to_[k]] += lower_[k];
    excess[from_[k]] -= lower_[k];
    link(from_[k], to_[k], upper_[k] - lower_[k], cost_[k], k);
  }
  Rational demand = 0;
  for (int v = 0; v < n_; ++v) {
    if (sgn(excess[v]) > 0) {
      link(S, v, excess[v], Rational(0), -1);
      demand += excess[v];
    } else if (sgn(excess[v]) < 0) {
      link(v, T, -excess[v], Rational(0), -1);
    }
  }

  std::vector<Rational> pot(N);
  Rational routed = 0;
  while (routed < demand) {
    std::vector<Rational> dist(N);
    std::vector<char> done(N, 0), seen(N, 0);
    std::vector<std::pair<int, int>> via(N, {-1, -1});
    seen[S] = 1;
    while (true) {
      int v = -1;
      for (int u = 0; u < N; ++u) {
        if (seen[u] && !done[u] && (v < 0 || dist[u] < dist[v])) v = u;
      }
      if (v < 0) break;
      done[v] = 1;
      for (int i = 0; i < static_cast<int>(g[v].size()); ++i) {
        const ResidualArc& a = g[v][i];
        if (sgn(a.cap) <= 0 || done[a.to]) continue;
        Rational d = dist[v] + a.cost + pot[v] - pot[a.to];
        if (!seen[a.to] || d < dist[a.to]) {
          seen[a.to] = 1;
          dist[a.to] = d;
          via[a.to] = {v, i};
        }
      }
    }
    if (!done[T]) return false;
    Rational far = 0;
    for (int u = 0; u < N; ++u) {
      if (done[u]) far = max_of(far, dist[u]);
    }
    for (int u = 0; u < N; ++u) pot[u] += done[u] ? dist[u] : far;
    Rational push = demand - routed;
    for (int v = T; v != S; v = via[v].first) push = min_of(push, g[via[v].first][via[v].second].cap);
    for (int v = T; v != S; v = via[v].first) {
      ResidualArc& a = g[via[v].first][via[v].second];
      a.cap -= push;
      g[v][a.twin].cap += push;
    }
    routed += push;
  }
  for (int k = 0; k < num_arcs(); ++k) flow_[k] = lower_[k];
  for (int v = 0; v < n_; ++v) {
    for (const ResidualArc& a : g[v]) {
      if (a.origin >= 0) flow_[a.origin] += (upper_[a.origin] - lower_[a.origin]) - a.cap;
    }
  }
  return true;
}

Rational MinCostCirculation::total_cost() const {
  Rational c = 0;
  for (int k = 0; k < num_arcs(); ++k) c += cost_[k] * flow_[k];
  return c;
}

bool MinCostCirculation::certify_optimal() const {
  // Bellman-Ford negative cycle detection on the residual graph.
  struct R {
    int a, b;
    Rational c;
  };
  std::vector<R> res;
  for (int k = 0; k < num_arcs(); ++k) {
    if (flow_[k] < upper_[k]) res.push_back({from_[k], to_[k], cost_[k]});
    if (flow_[k] > lower_[k]) res.push_back({to_[k], from_[k], -cost_[k]});
  }
  std::vector<Rational> d(n_);
  for (int round = 0; round < n_; ++round) {
    bool changed = false;
    for (const R& r : res) {
      if (d[r.a] + r.c < d[r.b]) {
        d[r.b] = d[r.a] + r.c;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace atsp
