#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace fixture {

Digraph c3() {
  Digraph g(3);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 2, 1);
  g.add_edge(2, 0, 1);
  return g;
}

Digraph k2() {
  Digraph g(2);
  g.add_edge(0, 1, 1);
  g.add_edge(1, 0, 1);
  return g;
}

Digraph two_tri() {
  Digraph g(6);
  for (int base : {0, 3}) {
    for (int i = 0; i < 3; ++i) g.add_edge(base + i, base + (i + 1) % 3, 1);
  }
  g.add_edge(0, 3, 5);
  g.add_edge(3, 0, 5);
  return g;
}

std::string GenCase::label() const {
  return model_name(model) + "-" + std::to_string(n) + "-" + std::to_string(seed);
}

std::vector<GenCase> generated_cases() {
  std::vector<GenCase> out;
  const auto& models = all_models();
  for (int i = 0; i < 100; ++i) {
    out.push_back({models[i % models.size()], 2 + (i / 4) % 14, 1000 + static_cast<std::uint64_t>(i)});
  }
  return out;
}

VertebratePair singleton_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t k) { return static_cast<int>(rng() % k); };
  const int n = 4 + below(9);
  const int k = 2 + below(3);
  std::map<std::pair<int, int>, Rational> xe;
  for (int c = 0; c < k; ++c) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
    for (int i = 0; i < n; ++i) xe[{p[i], p[(i + 1) % n]}] += Rational(1, k);
  }
  Digraph g(n);
  std::vector<Rational> x;
  for (auto& [e, v] : xe) {
    g.add_edge(e.first, e.second, 0);
    x.push_back(v);
  }
  std::vector<VertexSet> sets;
  std::vector<Rational> w;
  for (int v = 0; v < n; ++v) {
    sets.push_back({v});
    Rational y(1 + below(v == 0 ? 30 : 6), 1 + below(2));
    y.canonicalize();
    w.push_back(y);
  }
  StronglyLaminarInstance inst(g, LaminarFamily(n, sets, w), x);
  return VertebratePair{inst, EdgeMultiset(g.num_edges()), {0}};
}

SvenssonParams recording_params(Recording& rec) {
  SvenssonParams params;
  params.cover = [&rec](const SubtourCoverInstance& inst) {
    rec.covers.push_back(inst);
    return subtour_cover(inst);
  };
  return params;
}

VertebrateAlgorithm recording_algorithm(Recording& rec, const Rational& epsilon) {
  VertebrateAlgorithm alg;
  alg.kappa = 2;
  alg.eta = 14 + epsilon;
  alg.solve = [&rec, epsilon](const VertebratePair& pair) {
    SvenssonParams params = recording_params(rec);
    params.epsilon = epsilon;
    SvenssonTrace trace;
    EdgeMultiset F = vertebrate_solve(pair, params, &trace);
    rec.pairs.push_back(pair);
    rec.traces.push_back(trace);
    rec.solutions.push_back(F);
    return F;
  };
  return alg;
}

Recording record_pipeline(const Digraph& g) {
  Recording rec;
  solve_atsp(g, recording_algorithm(rec));
  return rec;
}

Recording record_singleton(std::uint64_t seed) {
  Recording rec;
  VertebratePair pair = singleton_pair(seed);
  SvenssonTrace trace;
  EdgeMultiset F = vertebrate_solve(pair, recording_params(rec), &trace);
  rec.pairs.push_back(pair);
  rec.traces.push_back(trace);
  rec.solutions.push_back(F);
  return rec;
}

std::vector<SubtourCoverInstance> cover_instances(std::size_t count) {
  std::vector<SubtourCoverInstance> out;
  // Most recorded calls start from an empty H; put some with a nonempty H
  // first so the merged-component path is always exercised.
  const std::size_t want = std::max<std::size_t>(1, count / 4);
  for (std::uint64_t seed = 1; seed <= 80 && out.size() < want; ++seed) {
    Recording r = record_singleton(seed);
    for (auto& c : r.covers) {
      if (!c.H.empty() && out.size() < want) out.push_back(std::move(c));
    }
  }
  auto cases = generated_cases();
  for (std::uint64_t i = 0; out.size() < count; ++i) {
    Recording a = record_singleton(i + 1);
    for (auto& c : a.covers) out.push_back(std::move(c));
    const GenCase& gc = cases[i % cases.size()];
    if (gc.n >= 3) {
      Recording b = record_pipeline(gen_instance(gc.model, gc.n, gc.seed));
      for (auto& c : b.covers) out.push_back(std::move(c));
    }
  }
  out.resize(count);
  return out;
}

}  // namespace fixture
