#include "atsp/generators.hpp"

#include <random>
#include <set>
#include <utility>

#include "atsp/errors.hpp"

namespace atsp {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  // Uniform enough for instance generation; avoids library-specific
  // distributions so outputs match across standard libraries.
  std::uint64_t below(std::uint64_t k) { return rng_() % k; }
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

class ArcSet {
 public:
  explicit ArcSet(int n) : g(n) {}
  void add(int t, int h, long cost) {
    if (t == h || !seen_.insert({t, h}).second) return;
    g.add_edge(t, h, Rational(cost));
  }
  Digraph g;

 private:
  std::set<std::pair<int, int>> seen_;
};

Digraph cycle(int n) {
  ArcSet a(n);
  for (int i = 0; i < n && n > 1; ++i) a.add(i, (i + 1) % n, 1);
  return std::move(a.g);
}

Digraph random_strong(int n, Draw& d) {
  ArcSet a(n);
  auto p = d.permutation(n);
  for (int i = 0; i < n && n > 1; ++i) a.add(p[i], p[(i + 1) % n], 1 + static_cast<long>(d.below(100)));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && d.chance(30)) a.add(u, v, 1 + static_cast<long>(d.below(100)));
    }
  }
  return std::move(a.g);
}

Digraph two_cluster(int n, std::uint64_t seed, Draw& d) {
  ArcSet a(n);
  const int left = (n + 1) / 2;
  auto ring = [&](int from, int size) {
    for (int i = 0; i < size && size > 1; ++i) a.add(from + i, from + (i + 1) % size, 1);
  };
  ring(0, left);
  ring(left, n - left);
  if (n >= 2) {
    long there = 5, back = 5;
    if (seed != 0) {
      there = 3 + static_cast<long>(d.below(6));
      back = 3 + static_cast<long>(d.below(6));
    }
    a.add(0, left, there);
    a.add(left, 0, back);
  }
  if (seed != 0) {
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const bool same = (u < left) == (v < left);
        if (same && d.chance(25)) a.add(u, v, 1 + static_cast<long>(d.below(3)));
        if (!same && d.chance(5)) a.add(u, v, 4 + static_cast<long>(d.below(6)));
      }
    }
  }
  return std::move(a.g);
}

Digraph unit_digraph(int n, Draw& d) {
  ArcSet a(n);
  auto order = d.permutation(n);
  // Put vertex 0 first so both trees hang off it.
  for (int i = 0; i < n; ++i) {
    if (order[i] == 0) std::swap(order[i], order[0]);
  }
  for (int i = 1; i < n; ++i) {
    a.add(order[d.below(i)], order[i], 1);
    a.add(order[i], order[d.below(i)], 1);
  }
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && d.chance(10)) a.add(u, v, 1);
    }
  }
  return std::move(a.g);
}

}  // namespace

GenModel parse_model(std::string_view name) {
  for (GenModel m : all_models()) {
    if (model_name(m) == name) return m;
  }
  throw InputError("unknown model '" + std::string(name) + "'");
}

std::string model_name(GenModel model) {
  switch (model) {
    case GenModel::kCycle:
      return "cycle";
    case GenModel::kRandomStrong:
      return "random-strong";
    case GenModel::kTwoCluster:
      return "two-cluster";
    case GenModel::kUnitDigraph:
      return "unit-digraph";
  }
  return "?";
}

const std::vector<GenModel>& all_models() {
  static const std::vector<GenModel> models{GenModel::kCycle, GenModel::kRandomStrong, GenModel::kTwoCluster,
                                            GenModel::kUnitDigraph};
  return models;
}

Digraph gen_instance(GenModel model, int n, std::uint64_t seed) {
  if (n < 1) throw InputError("n must be at least 1");
  Draw d(seed);
  switch (model) {
    case GenModel::kCycle:
      return cycle(n);
    case GenModel::kRandomStrong:
      return random_strong(n, d);
    case GenModel::kTwoCluster:
      return two_cluster(n, seed, d);
    case GenModel::kUnitDigraph:
      return unit_digraph(n, d);
  }
  return Digraph(n);
}

}  // namespace atsp
