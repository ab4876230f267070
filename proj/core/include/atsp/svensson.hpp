#pragma once

#include <functional>
#include <string>
#include <vector>

#include "atsp/graph.hpp"
#include "atsp/rational.hpp"
#include "atsp/subtour_cover.hpp"
#include "atsp/vertebrate.hpp"

namespace atsp {

using SubtourCoverAlgorithm = std::function<EdgeMultiset(const SubtourCoverInstance&)>;

struct SvenssonParams {
  // Guarantee constants of the subtour cover algorithm: components away from
  // the backbone cost at most alpha sum 2y_v, the whole cover at most
  // kappa LP + beta sum 2y_v.
  Rational alpha = 3;
  Rational kappa = 2;
  Rational beta = 1;
  Rational epsilon = 1;
  long restart_cap = 1000000;
  SubtourCoverAlgorithm cover;  // empty means subtour_cover
};

// Budget function used to define light edge sets.
class EllFunction {
 public:
  EllFunction(const VertebratePair& pair, const SvenssonParams& params);

  const Rational& operator()(VertexId v) const { return ell_[v]; }
  Rational of(const VertexSet& s) const;
  const Rational& epsilon_prime() const { return eps_prime_; }
  // sum over V \ V(B) of 2y_v
  const Rational& offbackbone() const { return off_; }
  Rational backbone_total() const;
  Rational offbackbone_total() const;
  // Exponent p of the potential; floating point, diagnostics only.
  double p() const { return p_; }
  // 1/(C n) for the regularization constant C.
  Rational regularization() const;
  int n() const { return static_cast<int>(ell_.size()); }

 private:
  std::vector<Rational> ell_;
  std::vector<char> on_b_;
  Rational alpha_, eps_prime_, off_;
  double p_ = 0;
};

struct KnapsackItem {
  Rational weight;  // > 0
  Rational profit;  // >= 0
};

// Greedy by profit/weight, skipping items that do not fit. Returns item
// indices in the order taken.
std::vector<int> knapsack_greedy(const std::vector<KnapsackItem>& items, const Rational& limit);

// Components W~_0 = V(B), W~_1.. of (V \ V(B), H~) by non-increasing ell,
// ties by smallest vertex.
struct ComponentState {
  EdgeMultiset H_tilde;
  std::vector<VertexSet> W;
  std::vector<Rational> ell_W;
  std::vector<int> index_of;  // vertex -> j
  int ind(const VertexSet& vs) const;
  int k() const { return static_cast<int>(W.size()) - 1; }
};

ComponentState make_component_state(const VertebratePair& pair, const EllFunction& ell, const EdgeMultiset& H_tilde);

// True iff every component of (V, H) costs at most ell of its vertex set.
bool is_light(const Digraph& g, const EllFunction& ell, const EdgeMultiset& H);

// log Phi over the components of (V \ V(B), H), as a double; -inf when Phi = 0.
double log_potential(const VertebratePair& pair, const EllFunction& ell, const EdgeMultiset& H);

struct BetterInitRecord {
  std::string rule;       // "2a" or "2b"
  int index = 0;          // ind(D)
  int merged = 0;         // |J|
  bool light = false;
  double log_phi_before = 0;
  double log_phi_after = 0;
  // after - before taken before rounding to double; the two logs alone can
  // round to the same value.
  double log_phi_gain = 0;
  bool progress = false;  // Phi increase above the regularized lower bound
};

// Replaces the components touched by D with one component made of D and the
// knapsack-selected components. Checks lightness and potential growth.
EdgeMultiset improved_initialization(const VertebratePair& pair, const EllFunction& ell, const ComponentState& state,
                                     const EdgeMultiset& D_edges, const VertexSet& D_vertices,
                                     BetterInitRecord* record = nullptr);

struct SvenssonTrace {
  int restarts = 0;
  int iterations = 0;         // outer loop passes over all restarts
  int cover_calls = 0;
  int cycles = 0;             // accepted cheap cycles
  std::vector<BetterInitRecord> better_inits;
  // Last successful iterate.
  Rational cost_H;
  Rational bound_H;           // ell(V(B)) + (2 + 1/(2 alpha)) ell(V \ V(B))
  Rational x_ledger, x_bound;
  Rational f_ledger, f_bound;
  // Final guarantee c(F) <= kappa LP + (4 alpha + beta + 1 + eps) sum 2y_v.
  Rational cost_final, bound_final;
};

struct IterateResult {
  bool solved = false;
  EdgeMultiset H;  // the solution when solved, else the better initialization
};

IterateResult svensson_iterate(const VertebratePair& pair, const EdgeMultiset& H_tilde, const EllFunction& ell,
                               const SvenssonParams& params, SvenssonTrace* trace = nullptr);

EdgeMultiset vertebrate_solve(const VertebratePair& pair, const SvenssonParams& params,
                              SvenssonTrace* trace = nullptr);
EdgeMultiset vertebrate_solve(const VertebratePair& pair, const Rational& epsilon);

}  // namespace atsp
