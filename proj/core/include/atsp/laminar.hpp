#pragma once

#include <vector>

#include "atsp/graph.hpp"
#include "atsp/rational.hpp"

namespace atsp {

// Index used for "the whole ground set V" wherever a family member is expected.
inline constexpr int kWholeSet = -1;

// Laminar family of proper nonempty subsets with positive weights.
// Members are stored by non-increasing size, ties by set contents.
class LaminarFamily {
 public:
  LaminarFamily() = default;
  LaminarFamily(int n, std::vector<VertexSet> sets, std::vector<Rational> weights);

  int ground_size() const { return n_; }
  int size() const { return static_cast<int>(sets_.size()); }
  const VertexSet& set(int i) const { return sets_[i]; }
  const std::vector<VertexSet>& sets() const { return sets_; }
  const Rational& weight(int i) const { return weights_[i]; }
  bool contains(int i, VertexId v) const { return i == kWholeSet || mask_[i][v] != 0; }
  int set_size(int i) const { return i == kWholeSet ? n_ : static_cast<int>(sets_[i].size()); }

  // Indices of the members containing v, largest first.
  const std::vector<int>& chain(VertexId v) const { return chain_[v]; }
  // Smallest member of L u {V} containing both vertices.
  int minimal_common(VertexId u, VertexId v) const;
  // Smallest member strictly containing i, or kWholeSet.
  int parent(int i) const { return parent_[i]; }
  // True iff member i is a subset of member or whole set j (i == j allowed).
  bool nested_in(int i, int j) const;
  int singleton(VertexId v) const { return singleton_[v]; }
  // y_{{v}} or zero.
  Rational vertex_weight(VertexId v) const;
  // Sum of y_L over members with exactly one endpoint inside.
  Rational crossing_weight(VertexId tail, VertexId head) const;
  bool crosses(int i, VertexId tail, VertexId head) const {
    return contains(i, tail) != contains(i, head);
  }
  Rational total_weight() const;

 private:
  int n_ = 0;
  std::vector<VertexSet> sets_;
  std::vector<Rational> weights_;
  std::vector<std::vector<char>> mask_;
  std::vector<std::vector<int>> chain_;
  std::vector<int> parent_;
  std::vector<int> singleton_;
};

}  // namespace atsp
