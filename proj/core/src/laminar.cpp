#include "atsp/laminar.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "atsp/errors.hpp"

namespace atsp {

LaminarFamily::LaminarFamily(int n, std::vector<VertexSet> sets, std::vector<Rational> weights) : n_(n) {
  if (sets.size() != weights.size()) throw ContractViolation("laminar family: weight count mismatch");
  std::vector<int> order(sets.size());
  std::iota(order.begin(), order.end(), 0);
  for (auto& s : sets) s = make_vertex_set(std::move(s));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (sets[a].size() != sets[b].size()) return sets[a].size() > sets[b].size();
    return sets[a] < sets[b];
  });
  for (int i : order) {
    const VertexSet& s = sets[i];
    if (s.empty() || static_cast<int>(s.size()) >= n || s.front() < 0 || s.back() >= n) {
      throw ContractViolation("laminar family: member must be a proper nonempty subset");
    }
    if (sgn(weights[i]) <= 0) throw ContractViolation("laminar family: nonpositive weight");
    if (!sets_.empty() && sets_.back() == s) throw ContractViolation("laminar family: duplicate member");
    sets_.push_back(s);
    weights_.push_back(weights[i]);
  }
  if (!check_laminar(sets_)) throw ContractViolation("laminar family: members cross");
  if (size() > 2 * n) throw ContractViolation("laminar family: more than 2n members");

  mask_.reserve(sets_.size());
  for (const auto& s : sets_) mask_.push_back(membership_mask(n, s));
  chain_.assign(n, {});
  singleton_.assign(n, -1);
  for (int i = 0; i < size(); ++i) {
    for (VertexId v : sets_[i]) chain_[v].push_back(i);
    if (sets_[i].size() == 1) singleton_[sets_[i][0]] = i;
  }
  parent_.assign(size(), kWholeSet);
  for (int i = 0; i < size(); ++i) {
    // Members are sorted by size, so the last strict superset in the chain
    // of any element is the smallest.
    const auto& ch = chain_[sets_[i][0]];
    for (int j : ch) {
      if (j == i) break;
      parent_[i] = j;
    }
  }
}

int LaminarFamily::minimal_common(VertexId u, VertexId v) const {
  int best = kWholeSet;
  for (int i : chain_[u]) {
    if (mask_[i][v]) best = i;
  }
  return best;
}

bool LaminarFamily::nested_in(int i, int j) const {
  if (j == kWholeSet) return true;
  if (i == kWholeSet) return false;
  return mask_[j][sets_[i][0]] && sets_[i].size() <= sets_[j].size();
}

Rational LaminarFamily::vertex_weight(VertexId v) const {
  return singleton_[v] >= 0 ? weights_[singleton_[v]] : Rational(0);
}

Rational LaminarFamily::crossing_weight(VertexId tail, VertexId head) const {
  Rational w = 0;
  for (int i : chain_[tail]) {
    if (!mask_[i][head]) w += weights_[i];
  }
  for (int i : chain_[head]) {
    if (!mask_[i][tail]) w += weights_[i];
  }
  return w;
}

Rational LaminarFamily::total_weight() const {
  Rational t = 0;
  for (const auto& w : weights_) t += w;
  return t;
}

}  // namespace atsp
