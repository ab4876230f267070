#include "atsp/simplex.hpp"

#include <string>

#include "atsp/errors.hpp"

namespace atsp {

namespace {
constexpr int kDegenerateStreakForBland = 25;
}

ExactSimplex::ExactSimplex(std::vector<Rational> costs)
    : num_structural_(static_cast<int>(costs.size())),
      cost_(std::move(costs)),
      artificial_(num_structural_, 0) {}

int ExactSimplex::add_row(const std::vector<LpTerm>& terms, RowSense sense, Rational rhs) {
  for (const auto& t : terms) {
    if (t.column < 0 || t.column >= num_structural_) throw ContractViolation("simplex: bad column");
  }
  if (warm_ok_ && sense != RowSense::kEqual) {
    append_row_to_tableau(terms, sense, rhs);
  } else {
    pending_.push_back({terms, sense, std::move(rhs)});
    solved_ = false;
  }
  return num_rows() + static_cast<int>(pending_.size()) - 1;
}

int ExactSimplex::add_column(const Rational& cost, bool artificial) {
  cost_.push_back(cost);
  artificial_.push_back(artificial ? 1 : 0);
  for (auto& row : rows_) row.emplace_back(0);
  reduced_.emplace_back(0);
  return static_cast<int>(cost_.size()) - 1;
}

void ExactSimplex::pivot(int r, int col) {
  ++pivots_;
  std::vector<Rational>& prow = rows_[r];
  const Rational inv = 1 / prow[col];
  std::vector<int> nz;
  for (int k = 0; k < static_cast<int>(prow.size()); ++k) {
    if (sgn(prow[k]) != 0) {
      prow[k] *= inv;
      nz.push_back(k);
    }
  }
  rhs_[r] *= inv;
  Rational f;
  for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
    if (i == r || sgn(rows_[i][col]) == 0) continue;
    f = rows_[i][col];
    for (int k : nz) rows_[i][k] -= f * prow[k];
    rhs_[i] -= f * rhs_[r];
  }
  if (sgn(reduced_[col]) != 0) {
    f = reduced_[col];
    for (int k : nz) reduced_[k] -= f * prow[k];
  }
  basis_[r] = col;
}

void ExactSimplex::reset_objective(std::vector<Rational>& obj, const std::vector<Rational>& costs) const {
  obj = costs;
  for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
    const Rational& cb = costs[basis_[i]];
    if (sgn(cb) == 0) continue;
    for (int k = 0; k < static_cast<int>(obj.size()); ++k) {
      if (sgn(rows_[i][k]) != 0) obj[k] -= cb * rows_[i][k];
    }
  }
}

// Minimizes with the reduced-cost row `obj` (kept in sync during pivots by
// temporarily swapping it into reduced_). Returns false when unbounded.
bool ExactSimplex::primal_simplex(std::vector<Rational>& obj, bool allow_artificial) {
  std::swap(obj, reduced_);
  int degenerate_streak = 0;
  bool unbounded = false;
  while (true) {
    const bool bland = degenerate_streak >= kDegenerateStreakForBland;
    int enter = -1;
    for (int k = 0; k < static_cast<int>(reduced_.size()); ++k) {
      if (!allow_artificial && artificial_[k]) continue;
      if (sgn(reduced_[k]) >= 0) continue;
      if (enter < 0) {
        enter = k;
        if (bland) break;
      } else if (reduced_[k] < reduced_[enter]) {
        enter = k;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    Rational best;
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
      if (sgn(rows_[i][enter]) <= 0) continue;
      Rational ratio = rhs_[i] / rows_[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) {
      unbounded = true;
      break;
    }
    degenerate_streak = sgn(best) == 0 ? degenerate_streak + 1 : 0;
    pivot(leave, enter);
  }
  std::swap(obj, reduced_);
  return !unbounded;
}

bool ExactSimplex::dual_simplex() {
  while (true) {
    int leave = -1;
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
      if (sgn(rhs_[i]) >= 0) continue;
      if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
    }
    if (leave < 0) return true;
    int enter = -1;
    Rational best;
    for (int k = 0; k < static_cast<int>(reduced_.size()); ++k) {
      if (artificial_[k] || sgn(rows_[leave][k]) >= 0) continue;
      Rational ratio = reduced_[k] / (-rows_[leave][k]);
      if (enter < 0 || ratio < best) {
        enter = k;
        best = ratio;
      }
    }
    if (enter < 0) return false;
    pivot(leave, enter);
  }
}

void ExactSimplex::append_row_to_tableau(const std::vector<LpTerm>& terms, RowSense sense,
                                         const Rational& rhs) {
  // Store the row with a +1 slack so the slack can be basic:
  //   <= :  a.x + s = b        (flip +1)
  //   >= : -a.x + s = -b       (flip -1)
  const int flip = sense == RowSense::kGreaterEqual ? -1 : 1;
  const int s = add_column(Rational(0), false);
  std::vector<Rational> row(cost_.size());
  for (const auto& t : terms) row[t.column] += flip * t.coef;
  row[s] = 1;
  Rational b = flip * rhs;
  for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
    const int bc = basis_[i];
    if (sgn(row[bc]) == 0) continue;
    Rational f = row[bc];
    for (int k = 0; k < static_cast<int>(row.size()); ++k) {
      if (sgn(rows_[i][k]) != 0) row[k] -= f * rows_[i][k];
    }
    b -= f * rhs_[i];
  }
  rows_.push_back(std::move(row));
  rhs_.push_back(std::move(b));
  basis_.push_back(s);
  row_info_.push_back({s, Rational(1), flip});
  solved_ = false;
}

LpStatus ExactSimplex::solve() {
  if (solved_) return status_;
  if (!pending_.empty()) {
    // Cold start: rebuild from scratch including all previous rows.
    std::vector<PendingRow> all;
    // Existing tableau rows were only ever created through a cold start or
    // warm appends, both of which we can no longer reconstruct cheaply, so a
    // cold start is only allowed before the first solve.
    if (!rows_.empty()) throw ContractViolation("simplex: equality rows after first solve");
    all.swap(pending_);
    cost_.resize(num_structural_);
    artificial_.assign(num_structural_, 0);
    reduced_.assign(num_structural_, Rational(0));
    std::vector<Rational> phase1_cost(num_structural_);
    bool need_phase1 = false;
    for (auto& pr : all) {
      Rational b = pr.rhs;
      int flip = 1;
      if (sgn(b) < 0) flip = -1;
      RowSense sense = pr.sense;
      if (flip < 0 && sense != RowSense::kEqual) {
        sense = sense == RowSense::kLessEqual ? RowSense::kGreaterEqual : RowSense::kLessEqual;
      }
      std::vector<Rational> row(cost_.size());
      for (const auto& t : pr.terms) row[t.column] += flip * t.coef;
      b *= flip;
      rows_.push_back(std::move(row));
      rhs_.push_back(b);
      const int r = static_cast<int>(rows_.size()) - 1;
      int basic = -1;
      RowInfo info{-1, Rational(1), flip};
      if (sense != RowSense::kEqual) {
        const int s = add_column(Rational(0), false);
        phase1_cost.emplace_back(0);
        Rational coef = sense == RowSense::kLessEqual ? 1 : -1;
        rows_[r][s] = coef;
        info.marker = s;
        info.marker_coef = coef;
        if (coef > 0) basic = s;
      }
      if (basic < 0) {
        const int a = add_column(Rational(0), true);
        phase1_cost.emplace_back(1);
        rows_[r][a] = 1;
        basic = a;
        need_phase1 = true;
        if (info.marker < 0) info.marker = a;
      }
      basis_.push_back(basic);
      row_info_.push_back(info);
    }
    if (need_phase1) {
      std::vector<Rational> obj;
      reset_objective(obj, phase1_cost);
      primal_simplex(obj, true);
      Rational infeas = 0;
      for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
        if (artificial_[basis_[i]]) infeas += rhs_[i];
      }
      if (sgn(infeas) > 0) {
        solved_ = true;
        status_ = LpStatus::kInfeasible;
        return status_;
      }
      // Drive zero-level artificials out of the basis where possible.
      for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
        if (!artificial_[basis_[i]]) continue;
        for (int k = 0; k < static_cast<int>(cost_.size()); ++k) {
          if (!artificial_[k] && sgn(rows_[i][k]) != 0) {
            pivot(i, k);
            break;
          }
        }
      }
    }
    reset_objective(reduced_, cost_);
  } else if (!rows_.empty()) {
    if (!dual_simplex()) {
      warm_ok_ = false;
      solved_ = true;
      status_ = LpStatus::kInfeasible;
      return status_;
    }
  } else {
    reduced_ = cost_;
  }
  std::vector<Rational> obj;
  obj.swap(reduced_);
  const bool bounded = primal_simplex(obj, false);
  obj.swap(reduced_);
  solved_ = true;
  status_ = bounded ? LpStatus::kOptimal : LpStatus::kUnbounded;
  warm_ok_ = bounded;
  return status_;
}

std::vector<Rational> ExactSimplex::primal() const {
  std::vector<Rational> x(num_structural_);
  for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
    if (basis_[i] < num_structural_) x[basis_[i]] = rhs_[i];
  }
  return x;
}

Rational ExactSimplex::objective() const {
  Rational z = 0;
  auto x = primal();
  for (int j = 0; j < num_structural_; ++j) z += cost_[j] * x[j];
  return z;
}

std::vector<Rational> ExactSimplex::duals() const {
  // Reduced cost of the marker column m with coefficient k in stored row r
  // and zero elsewhere is c_m - pi_r * k with c_m = 0.
  std::vector<Rational> y(row_info_.size());
  for (int r = 0; r < static_cast<int>(row_info_.size()); ++r) {
    const RowInfo& info = row_info_[r];
    Rational pi = -reduced_[info.marker] / info.marker_coef;
    y[r] = info.flip * pi;
  }
  return y;
}

}  // namespace atsp
