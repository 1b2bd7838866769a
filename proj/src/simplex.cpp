#include "incfl/simplex.hpp"

#include <cmath>
#include <limits>

#include "incfl/errors.hpp"

namespace incfl {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-7;
constexpr long kMaxIterations = 200000;

struct Tableau {
  int m = 0;  // rows
  int n = 0;  // columns excluding the rhs
  std::vector<std::vector<double>> a;  // m x (n+1); last entry is the rhs
  std::vector<double> cost;            // n+1; last entry is -(objective)
  std::vector<int> basis;              // m

  void pivot(int row, int col) {
    std::vector<double>& pr = a[row];
    const double p = pr[col];
    for (double& v : pr) v /= p;
    pr[col] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = a[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= n; ++j) a[i][j] -= f * pr[j];
      a[i][col] = 0.0;
    }
    const double f = cost[col];
    if (f != 0.0) {
      for (int j = 0; j <= n; ++j) cost[j] -= f * pr[j];
      cost[col] = 0.0;
    }
    basis[row] = col;
  }

  // Bland's rule: smallest eligible entering column; leaving row breaks
  // ratio ties by smallest basic variable index.
  LpStatus run(int max_enter_col) {
    for (long iter = 0; iter < kMaxIterations; ++iter) {
      int enter = -1;
      for (int j = 0; j < max_enter_col; ++j) {
        if (cost[j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] <= kPivotEps) continue;
        const double ratio = a[i][n] / a[i][enter];
        if (ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && leave >= 0 && basis[i] < basis[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    throw Error("simplex: iteration limit exceeded");
  }
};

}  // namespace

LpResult solve_lp(const LpProblem& lp) {
  const int n0 = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  int nslack = 0;
  for (const LpRow& r : lp.rows)
    if (r.rel != Relation::Equal) ++nslack;
  const int art0 = n0 + nslack;  // first artificial column
  const int n = art0 + m;

  Tableau t;
  t.m = m;
  t.n = n;
  t.a.assign(m, std::vector<double>(n + 1, 0.0));
  t.basis.assign(m, -1);

  int slack = n0;
  for (int i = 0; i < m; ++i) {
    const LpRow& r = lp.rows[i];
    for (int j = 0; j < n0; ++j) t.a[i][j] = r.coeff[j];
    t.a[i][n] = r.rhs;
    if (r.rel == Relation::LessEq) t.a[i][slack++] = 1.0;
    else if (r.rel == Relation::GreaterEq) t.a[i][slack++] = -1.0;
    if (t.a[i][n] < 0.0)
      for (int j = 0; j <= n; ++j) t.a[i][j] = -t.a[i][j];
    t.a[i][art0 + i] = 1.0;
    t.basis[i] = art0 + i;
  }

  // Phase 1: drive the artificial variables to zero. Starting from the
  // all-artificial basis, the canonical cost row is just -sum of all rows.
  t.cost.assign(n + 1, 0.0);
  for (int i = 0; i < m; ++i) t.cost[art0 + i] = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) t.cost[j] -= t.a[i][j];
  t.run(n);

  double scale = 1.0;
  for (const LpRow& r : lp.rows) scale = std::max(scale, std::fabs(r.rhs));
  if (-t.cost[n] > kFeasEps * scale) return {LpStatus::Infeasible, 0.0, {}};

  // Pivot remaining (degenerate) artificials out where possible.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (std::fabs(t.a[i][j]) > kPivotEps) {
        t.pivot(i, j);
        break;
      }
    }
    // A fully zero row is redundant; its artificial stays basic at zero.
  }

  // Phase 2 with the real objective; artificial columns are barred.
  t.cost.assign(n + 1, 0.0);
  for (int j = 0; j < n0; ++j) t.cost[j] = lp.objective[j];
  for (int i = 0; i < m; ++i) {
    const double cb = t.basis[i] < n0 ? lp.objective[t.basis[i]] : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= n; ++j) t.cost[j] -= cb * t.a[i][j];
  }
  if (t.run(art0) == LpStatus::Unbounded) return {LpStatus::Unbounded, 0.0, {}};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x.assign(n0, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n0) res.x[t.basis[i]] = t.a[i][n];
  for (int j = 0; j < n0; ++j) res.objective += lp.objective[j] * res.x[j];
  return res;
}

}  // namespace incfl
