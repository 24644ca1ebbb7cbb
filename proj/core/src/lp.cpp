#include "socheck/lp.hpp"

#include <algorithm>
#include <cmath>

#include "socheck/errors.hpp"

namespace socheck::lp {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-9;
constexpr int kMaxPivots = 20000;

// Standard-form problem: minimize c.u subject to A u = b, u >= 0, b >= 0.
// Column layout: structural columns first (variable substitutions, then one
// slack per inequality/bound row), artificials appended by the solver.
struct Standard {
  Mat A;                    // m x ncols (no artificials)
  Vec b;                    // >= 0 after row flips
  std::vector<double> row_flip;  // +-1 applied to each row
  int n_eq = 0;             // original equality rows come first
  int n_in = 0;             // then original inequality rows
  // per original variable: substitution u-columns
  struct VarMap {
    int col_pos = -1;   // coefficient +1 column
    int col_neg = -1;   // coefficient -1 column (free variables)
    double offset = 0.0;
    double sign = 1.0;  // x = offset + sign * u[col_pos] when col_neg < 0
    int bound_row = -1;  // upper-bound row for two-sided variables
  };
  std::vector<VarMap> vars;
};

Standard standardize(const std::vector<Constraint>& eqs,
                     const std::vector<Constraint>& ineqs,
                     const std::vector<Bounds>& bounds) {
  const int nvar = static_cast<int>(bounds.size());
  Standard std_form;
  std_form.n_eq = static_cast<int>(eqs.size());
  std_form.n_in = static_cast<int>(ineqs.size());
  std_form.vars.resize(nvar);

  int ncols = 0;
  int extra_rows = 0;  // upper-bound rows for two-sided variables
  for (int j = 0; j < nvar; ++j) {
    auto& vm = std_form.vars[j];
    const double lo = bounds[j].lo, hi = bounds[j].hi;
    if (std::isfinite(lo)) {
      vm.offset = lo;
      vm.sign = 1.0;
      vm.col_pos = ncols++;
      if (std::isfinite(hi)) ++extra_rows;
    } else if (std::isfinite(hi)) {
      vm.offset = hi;
      vm.sign = -1.0;
      vm.col_pos = ncols++;
    } else {
      vm.col_pos = ncols++;
      vm.col_neg = ncols++;
    }
  }
  const int slack_base = ncols;
  ncols += std_form.n_in + extra_rows;

  const int nrows = std_form.n_eq + std_form.n_in + extra_rows;
  std_form.A = Mat::Zero(nrows, ncols);
  std_form.b = Vec::Zero(nrows);
  std_form.row_flip.assign(nrows, 1.0);

  auto emit_row = [&](int row, const Vec& coeffs, double rhs, int slack_col) {
    double adjusted = rhs;
    for (int j = 0; j < nvar; ++j) {
      const auto& vm = std_form.vars[j];
      const double a = coeffs[j];
      if (a == 0.0) continue;
      adjusted -= a * vm.offset;
      std_form.A(row, vm.col_pos) += a * vm.sign;
      if (vm.col_neg >= 0) std_form.A(row, vm.col_neg) -= a;
    }
    if (slack_col >= 0) std_form.A(row, slack_col) = 1.0;
    std_form.b[row] = adjusted;
  };

  int row = 0;
  for (const auto& c : eqs) emit_row(row++, c.coeffs, c.rhs, -1);
  int slack = slack_base;
  for (const auto& c : ineqs) emit_row(row++, c.coeffs, c.rhs, slack++);
  for (int j = 0; j < nvar; ++j) {
    auto& vm = std_form.vars[j];
    if (vm.sign > 0 && std::isfinite(bounds[j].hi) &&
        std::isfinite(bounds[j].lo)) {
      std_form.A(row, vm.col_pos) = 1.0;
      std_form.A(row, slack) = 1.0;
      std_form.b[row] = bounds[j].hi - bounds[j].lo;
      vm.bound_row = row;
      ++slack;
      ++row;
    }
  }

  for (int r = 0; r < nrows; ++r) {
    if (std_form.b[r] < 0.0) {
      std_form.A.row(r) *= -1.0;
      std_form.b[r] *= -1.0;
      std_form.row_flip[r] = -1.0;
    }
  }
  return std_form;
}

// Dense tableau simplex state.
struct Tableau {
  Mat T;                  // m x (ncols_total + 1); last column is rhs
  Vec cost;               // reduced-cost row, ncols_total entries
  double cost_rhs = 0.0;  // negative of current objective
  std::vector<int> basis;
  int n_struct = 0;  // columns eligible to enter (excludes artificials)

  int rows() const { return static_cast<int>(T.rows()); }
  int cols() const { return static_cast<int>(T.cols()) - 1; }

  void pivot(int row, int col) {
    T.row(row) /= T(row, col);
    for (int r = 0; r < rows(); ++r) {
      if (r == row) continue;
      const double f = T(r, col);
      if (f != 0.0) T.row(r) -= f * T.row(row);
    }
    const double cf = cost[col];
    if (cf != 0.0) {
      cost -= cf * T.row(row).head(cols()).transpose();
      cost_rhs -= cf * T(row, cols());
    }
    basis[row] = col;
  }

  // Bland: entering = smallest-index eligible column with negative reduced
  // cost; leaving = min-ratio row, ties broken by smallest basic index.
  // Returns false at optimality; throws on iteration cap.
  enum class Step { Optimal, Pivoted, Unbounded };
  Step step() {
    int enter = -1;
    for (int j = 0; j < n_struct; ++j) {
      if (cost[j] < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Step::Optimal;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows(); ++r) {
      const double a = T(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = T(r, cols()) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return Step::Unbounded;
    pivot(leave, enter);
    return Step::Pivoted;
  }
};

struct Phase1Outcome {
  bool feasible = false;
  Vec dual;  // y over standardized rows (before unflipping)
};

// Runs phase 1 in-place; on success the tableau basis is primal feasible for
// the structural columns and artificials are zero.
Phase1Outcome run_phase1(Tableau& tab, const Standard& sf) {
  const int m = static_cast<int>(sf.A.rows());
  const int n = static_cast<int>(sf.A.cols());

  tab.T = Mat::Zero(m, n + m + 1);
  tab.T.block(0, 0, m, n) = sf.A;
  tab.T.block(0, n, m, m) = Mat::Identity(m, m);
  tab.T.col(n + m) = sf.b;
  tab.basis.resize(m);
  for (int r = 0; r < m; ++r) tab.basis[r] = n + r;
  tab.n_struct = n;

  // Phase-1 cost: sum of artificials; reduced costs after pricing out.
  tab.cost = Vec::Zero(n + m);
  tab.cost_rhs = 0.0;
  for (int r = 0; r < m; ++r) {
    tab.cost.head(n) -= tab.T.row(r).head(n).transpose();
    tab.cost_rhs -= tab.T(r, n + m);
  }

  for (int it = 0; it < kMaxPivots; ++it) {
    const auto s = tab.step();
    if (s == Tableau::Step::Optimal) break;
    if (s == Tableau::Step::Unbounded)
      throw NumericalFailure("phase-1 simplex reported unbounded");
    if (it + 1 == kMaxPivots)
      throw NumericalFailure("simplex pivot cap exceeded in phase 1");
  }

  Phase1Outcome out;
  const double objective = -tab.cost_rhs;
  const double tol = 1e-8 * (1.0 + sf.b.lpNorm<1>());
  if (objective > tol) {
    // y_i = 1 - reduced_cost(artificial_i) reproduces the phase-1 duals.
    out.feasible = false;
    out.dual = Vec(m);
    for (int r = 0; r < m; ++r) out.dual[r] = 1.0 - tab.cost[n + r];
    return out;
  }

  // Drive stray artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.T(r, j)) > kPivotTol) {
        col = j;
        break;
      }
    }
    if (col >= 0) tab.pivot(r, col);
    // else: redundant row; the artificial stays basic at value zero.
  }
  out.feasible = true;
  return out;
}

Vec extract_solution(const Tableau& tab, const Standard& sf) {
  const int n = static_cast<int>(sf.A.cols());
  Vec u = Vec::Zero(n);
  for (int r = 0; r < tab.rows(); ++r)
    if (tab.basis[r] < n) u[tab.basis[r]] = tab.T(r, tab.cols());

  Vec x(sf.vars.size());
  for (std::size_t j = 0; j < sf.vars.size(); ++j) {
    const auto& vm = sf.vars[j];
    double v = vm.offset + vm.sign * u[vm.col_pos];
    if (vm.col_neg >= 0) v -= u[vm.col_neg];
    x[static_cast<int>(j)] = v;
  }
  return x;
}

Farkas extract_farkas(const Vec& dual, const Standard& sf,
                      const std::vector<Constraint>& eqs,
                      const std::vector<Constraint>& ineqs,
                      const std::vector<Bounds>& bounds) {
  const int nvar = static_cast<int>(bounds.size());
  // Undo the row sign flips, then negate: with w = flip*y the phase-1 duals
  // satisfy w.A' <= 0 columnwise and w.b' > 0 over the unflipped rows.
  Farkas f;
  f.y_eq = Vec::Zero(sf.n_eq);
  f.y_ineq = Vec::Zero(sf.n_in);
  for (int r = 0; r < sf.n_eq; ++r) f.y_eq[r] = -sf.row_flip[r] * dual[r];
  for (int r = 0; r < sf.n_in; ++r)
    f.y_ineq[r] = -sf.row_flip[sf.n_eq + r] * dual[sf.n_eq + r];

  // Clip tiny negative inequality multipliers caused by roundoff.
  for (int r = 0; r < sf.n_in; ++r) f.y_ineq[r] = std::max(f.y_ineq[r], 0.0);

  // Bound multipliers close the stationarity residual componentwise. For
  // two-sided variables the upper-bound row carries its own dual.
  f.y_lo = Vec::Zero(nvar);
  f.y_hi = Vec::Zero(nvar);
  Vec g = Vec::Zero(nvar);
  for (int r = 0; r < sf.n_eq; ++r) g += f.y_eq[r] * eqs[r].coeffs;
  for (int r = 0; r < sf.n_in; ++r) g += f.y_ineq[r] * ineqs[r].coeffs;
  for (int j = 0; j < nvar; ++j) {
    const bool lo_fin = std::isfinite(bounds[j].lo);
    const bool hi_fin = std::isfinite(bounds[j].hi);
    const int br = sf.vars[j].bound_row;
    if (br >= 0) {
      const double w_u = sf.row_flip[br] * dual[br];  // <= 0
      f.y_hi[j] = std::max(0.0, -w_u);
      f.y_lo[j] = std::max(0.0, g[j] + f.y_hi[j]);
    } else if (lo_fin) {
      f.y_lo[j] = std::max(0.0, g[j]);
    } else if (hi_fin) {
      f.y_hi[j] = std::max(0.0, -g[j]);
    }
  }
  return f;
}

}  // namespace

bool farkas_valid(const Farkas& f, const std::vector<Constraint>& eqs,
                  const std::vector<Constraint>& ineqs,
                  const std::vector<Bounds>& bounds, double tol) {
  const int nvar = static_cast<int>(bounds.size());
  for (int r = 0; r < f.y_ineq.size(); ++r)
    if (f.y_ineq[r] < -tol) return false;
  Vec g = Vec::Zero(nvar);
  for (int r = 0; r < f.y_eq.size(); ++r) g += f.y_eq[r] * eqs[r].coeffs;
  for (int r = 0; r < f.y_ineq.size(); ++r)
    g += f.y_ineq[r] * ineqs[r].coeffs;
  g += f.y_hi - f.y_lo;
  if (g.lpNorm<Eigen::Infinity>() > tol) return false;

  double rhs = 0.0;
  for (int r = 0; r < f.y_eq.size(); ++r) rhs += f.y_eq[r] * eqs[r].rhs;
  for (int r = 0; r < f.y_ineq.size(); ++r) rhs += f.y_ineq[r] * ineqs[r].rhs;
  for (int j = 0; j < nvar; ++j) {
    if (f.y_lo[j] != 0.0) {
      if (!std::isfinite(bounds[j].lo)) return false;
      rhs -= f.y_lo[j] * bounds[j].lo;
    }
    if (f.y_hi[j] != 0.0) {
      if (!std::isfinite(bounds[j].hi)) return false;
      rhs += f.y_hi[j] * bounds[j].hi;
    }
  }
  return rhs < -tol;
}

Result feasible_point(const std::vector<Constraint>& eqs,
                      const std::vector<Constraint>& ineqs,
                      const std::vector<Bounds>& bounds) {
  if (bounds.size() > 200)
    throw PreconditionFailed("lp: more than 200 variables");
  const Standard sf = standardize(eqs, ineqs, bounds);
  Tableau tab;
  const auto p1 = run_phase1(tab, sf);
  Result res;
  if (!p1.feasible) {
    res.status = Status::Infeasible;
    res.farkas = extract_farkas(p1.dual, sf, eqs, ineqs, bounds);
    return res;
  }
  res.status = Status::Feasible;
  res.x = extract_solution(tab, sf);
  return res;
}

OptResult minimize(const Vec& c, const std::vector<Constraint>& eqs,
                   const std::vector<Constraint>& ineqs,
                   const std::vector<Bounds>& bounds) {
  if (bounds.size() > 200)
    throw PreconditionFailed("lp: more than 200 variables");
  const Standard sf = standardize(eqs, ineqs, bounds);
  Tableau tab;
  const auto p1 = run_phase1(tab, sf);
  OptResult res;
  if (!p1.feasible) {
    res.status = OptStatus::Infeasible;
    res.farkas = extract_farkas(p1.dual, sf, eqs, ineqs, bounds);
    return res;
  }

  // Phase 2: price the real objective in terms of the current basis.
  const int n = static_cast<int>(sf.A.cols());
  Vec std_cost = Vec::Zero(n + tab.rows());
  double const_term = 0.0;
  for (std::size_t j = 0; j < sf.vars.size(); ++j) {
    const auto& vm = sf.vars[j];
    const double cj = c[static_cast<int>(j)];
    if (cj == 0.0) continue;
    const_term += cj * vm.offset;
    std_cost[vm.col_pos] += cj * vm.sign;
    if (vm.col_neg >= 0) std_cost[vm.col_neg] -= cj;
  }

  tab.cost = std_cost;
  tab.cost_rhs = 0.0;
  for (int r = 0; r < tab.rows(); ++r) {
    const int bj = tab.basis[r];
    const double cb = std_cost[bj];
    if (cb != 0.0) {
      tab.cost -= cb * tab.T.row(r).head(tab.cols()).transpose();
      tab.cost_rhs -= cb * tab.T(r, tab.cols());
    }
  }
  tab.cost.tail(tab.rows()).setZero();  // artificials stay out

  for (int it = 0;; ++it) {
    if (it >= kMaxPivots) {
      res.status = OptStatus::IterationLimit;
      return res;
    }
    const auto s = tab.step();
    if (s == Tableau::Step::Optimal) break;
    if (s == Tableau::Step::Unbounded) {
      res.status = OptStatus::Unbounded;
      return res;
    }
  }

  res.status = OptStatus::Optimal;
  res.x = extract_solution(tab, sf);
  res.objective = -tab.cost_rhs + const_term;
  return res;
}

}  // namespace socheck::lp
