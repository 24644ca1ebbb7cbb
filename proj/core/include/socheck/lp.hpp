#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "socheck/expr.hpp"

namespace socheck::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One linear row: coeffs . x  (= or <=)  rhs.
struct Constraint {
  Vec coeffs;
  double rhs = 0.0;
};

struct Bounds {
  double lo = 0.0;
  double hi = kInf;
};

/// Dual ray proving infeasibility of {A_eq x = b_eq, A_in x <= b_in,
/// lo <= x <= hi}. It satisfies, up to solver tolerance,
///   A_eq^T y_eq + A_in^T y_ineq + y_hi - y_lo = 0,   y_ineq, y_lo, y_hi >= 0
///   y_eq.b_eq + y_ineq.b_in + y_hi.hi - y_lo.lo < 0
/// so no point in the box can satisfy all rows.
struct Farkas {
  Vec y_eq;
  Vec y_ineq;
  Vec y_lo;
  Vec y_hi;
};

enum class Status { Feasible, Infeasible, IterationLimit };

struct Result {
  Status status = Status::IterationLimit;
  Vec x;
  std::optional<Farkas> farkas;
};

/// Feasibility search by phase-1 simplex with Bland's rule (deterministic,
/// cycle-free). Returns a feasible point or a Farkas certificate.
Result feasible_point(const std::vector<Constraint>& equalities,
                      const std::vector<Constraint>& inequalities,
                      const std::vector<Bounds>& bounds);

enum class OptStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct OptResult {
  OptStatus status = OptStatus::IterationLimit;
  Vec x;
  double objective = 0.0;
  std::optional<Farkas> farkas;
};

/// Two-phase simplex: minimize c.x over the same constraint classes.
OptResult minimize(const Vec& c, const std::vector<Constraint>& equalities,
                   const std::vector<Constraint>& inequalities,
                   const std::vector<Bounds>& bounds);

/// Recomputes the two Farkas inequalities by direct arithmetic.
bool farkas_valid(const Farkas& f, const std::vector<Constraint>& equalities,
                  const std::vector<Constraint>& inequalities,
                  const std::vector<Bounds>& bounds, double tol = 1e-7);

}  // namespace socheck::lp
