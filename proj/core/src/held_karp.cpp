#include "atsp/held_karp.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "atsp/errors.hpp"

namespace atsp {

namespace {

template <class T>
T dp_tour(const std::vector<std::vector<T>>& d, const T& inf) {
  const int n = static_cast<int>(d.size());
  const int k = n - 1;  // vertices 1..n-1 live in the mask
  const std::size_t full = (std::size_t{1} << k) - 1;
  std::vector<T> dp((full + 1) * k, inf);
  for (int j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = d[0][j + 1];
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < k; ++j) {
      if (!(mask >> j & 1)) continue;
      const T& cur = dp[mask * k + j];
      if (cur == inf) continue;
      for (int t = 0; t < k; ++t) {
        if (mask >> t & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << t);
        T cand = cur + d[j + 1][t + 1];
        if (cand < dp[next * k + t]) dp[next * k + t] = cand;
      }
    }
  }
  T best = inf;
  for (int j = 0; j < k; ++j) {
    if (dp[full * k + j] == inf) continue;
    T cand = dp[full * k + j] + d[j + 1][0];
    if (cand < best) best = cand;
  }
  return best;
}

}  // namespace

Rational held_karp_opt(const Digraph& g) {
  const int n = g.num_vertices();
  if (n > kHeldKarpMaxVertices) {
    throw InputError("held_karp: " + std::to_string(n) + " vertices exceed the limit of " +
                     std::to_string(kHeldKarpMaxVertices));
  }
  if (n <= 1) return Rational(0);

  // Scale to integers, then close under shortest paths.
  mpz_class den = 1;
  for (const Edge& e : g.edges()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.cost.get_den_mpz_t());
  std::vector<std::vector<std::optional<mpz_class>>> d(n, std::vector<std::optional<mpz_class>>(n));
  for (int v = 0; v < n; ++v) d[v][v] = mpz_class(0);
  for (const Edge& e : g.edges()) {
    mpz_class c = e.cost.get_num() * (den / e.cost.get_den());
    if (!d[e.tail][e.head] || c < *d[e.tail][e.head]) d[e.tail][e.head] = c;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!d[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (!d[k][j]) continue;
        mpz_class via = *d[i][k] + *d[k][j];
        if (!d[i][j] || via < *d[i][j]) d[i][j] = via;
      }
    }
  }
  mpz_class biggest = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!d[i][j]) throw InfeasibleInstance("held_karp: graph is not strongly connected");
      if (*d[i][j] > biggest) biggest = *d[i][j];
    }
  }

  mpz_class total;
  const mpz_class limit = mpz_class(std::numeric_limits<std::int64_t>::max() / 4) / (n + 1);
  if (biggest <= limit) {
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = d[i][j]->get_si();
    }
    total = mpz_class(std::to_string(dp_tour<std::int64_t>(m, std::numeric_limits<std::int64_t>::max())));
  } else {
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
    mpz_class inf = 1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        m[i][j] = *d[i][j];
        inf += *d[i][j];
      }
    }
    total = dp_tour<mpz_class>(m, inf);
  }
  Rational out(total, den);
  out.canonicalize();
  return out;
}

}  // namespace atsp
