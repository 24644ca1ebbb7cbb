#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "socheck/problem.hpp"
#include "socheck/raycalc.hpp"

namespace socheck {

/// A direction satisfying the criticality system at the base point, with the
/// diagnostics that witnessed it.
struct CriticalDirection {
  Vec d;
  Vec objective_slacks;            // <grad f_j, d> per objective
  double equality_residual = 0.0;  // |J_H d|
  std::vector<int> active_rows;    // rows of Q active at G(x)
  bool regular = false;
};

/// Scale used by every cone test: 1e-7 * (1 + |grad F(x)|_F).
double critical_tolerance(const ProblemInstance& p, const Vec& x);

/// Generators of the normal cone to Q at z: the active rows of the
/// half-space description (for the orthant, +e_i per active coordinate).
/// Throws NotInQ when z violates a row beyond tol.
std::vector<Vec> normal_cone_rep(const PolyhedronSpec& q, const Vec& z,
                                 double tol);

/// v in cone(Q - z): A_i v <= tol on every active row. Polyhedral cones are
/// closed, so this is the exact closure test.
bool feasible_cone_membership(const PolyhedronSpec& q, const Vec& z,
                              const Vec& v, double tol);

/// Evaluates the criticality system at tolerance critical_tolerance(p, x);
/// returns the populated record (with regular set via is_regular) or nullopt.
/// Throws InfeasiblePoint when x itself is infeasible.
std::optional<CriticalDirection> is_critical(const ProblemInstance& p,
                                             const Vec& x, const Vec& d,
                                             const RayConfig& ray_cfg = {});

/// A critical direction is regular when both second-order cluster sets are
/// nonempty and the constraint-map derivative lies in cone(Q - G(x)) (which
/// for polyhedra already follows from criticality).
bool is_regular(const ProblemInstance& p, const Vec& x, const Vec& d,
                const RayConfig& ray_cfg = {});

/// Support value of z* over the second-order admissible variation set of Q
/// at (z, dz): 0 when z* is a normal at z orthogonal to dz, +infinity
/// otherwise. Requires dz in cone(Q - z).
double qcirc_support(const PolyhedronSpec& q, const Vec& z, const Vec& dz,
                     const Vec& zstar, double tol);

struct DirectionConfig {
  std::vector<Vec> user_directions;
  int random_count = 16;
  bool rays = true;
  std::uint64_t seed = 2718;
  RayConfig ray_cfg;
};

/// Candidate critical directions: user-supplied and random unit vectors
/// filtered through is_critical, extreme rays of the polyhedral critical
/// cone for n <= 6 (rays of the pointed part plus a signed basis of the
/// lineality space), and always the zero direction.
std::vector<CriticalDirection> enumerate_directions(
    const ProblemInstance& p, const Vec& x, const DirectionConfig& cfg = {});

}  // namespace socheck
