#pragma once

#include <vector>

namespace incfl {

enum class Relation { LessEq, GreaterEq, Equal };

struct LpRow {
  std::vector<double> coeff;  // dense, size num_vars
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

// min objective . x  subject to rows, x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Dense two-phase primal simplex with Bland's pivoting rule. Deterministic:
// the same problem always yields the same basic optimal solution.
LpResult solve_lp(const LpProblem& lp);

}  // namespace incfl
