#pragma once

#include <vector>

#include "atsp/rational.hpp"

namespace atsp {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpTerm {
  int column;
  Rational coef;
};

// Dense-tableau simplex over exact rationals for
//   minimize c.x  subject to rows, x >= 0.
// Rows may be appended after an optimal solve; the next solve then starts
// from the previous basis with the dual simplex method.
class ExactSimplex {
 public:
  explicit ExactSimplex(std::vector<Rational> costs);

  int add_row(const std::vector<LpTerm>& terms, RowSense sense, Rational rhs);
  LpStatus solve();

  int num_columns() const { return num_structural_; }
  int num_rows() const { return static_cast<int>(row_info_.size()); }
  Rational objective() const;
  std::vector<Rational> primal() const;
  // Multiplier per row with c - sum_r dual_r * a_r >= 0 at optimality:
  // nonnegative on >= rows, nonpositive on <= rows.
  std::vector<Rational> duals() const;
  long pivots() const { return pivots_; }

 private:
  struct RowInfo {
    int marker;       // slack or artificial column used to read the dual
    Rational marker_coef;
    int flip;         // +1 or -1: stored row = flip * original row
  };

  int add_column(const Rational& cost, bool artificial);
  void pivot(int r, int col);
  bool primal_simplex(std::vector<Rational>& obj, bool allow_artificial);
  bool dual_simplex();
  void reset_objective(std::vector<Rational>& obj, const std::vector<Rational>& costs) const;
  void append_row_to_tableau(const std::vector<LpTerm>& terms, RowSense sense, const Rational& rhs);

  int num_structural_;
  std::vector<Rational> cost_;            // per column
  std::vector<char> artificial_;          // per column
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::vector<Rational> reduced_;         // phase-2 reduced costs
  std::vector<RowInfo> row_info_;
  struct PendingRow {
    std::vector<LpTerm> terms;
    RowSense sense;
    Rational rhs;
  };
  std::vector<PendingRow> pending_;
  bool solved_ = false;
  bool warm_ok_ = false;
  LpStatus status_ = LpStatus::kInfeasible;
  long pivots_ = 0;
};

}  // namespace atsp
