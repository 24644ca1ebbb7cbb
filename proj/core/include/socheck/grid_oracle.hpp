#pragma once

#include "socheck/problem.hpp"

namespace socheck {

enum class ParetoTruth { WeakPareto, NotWeakPareto };

struct GridOracleConfig {
  /// Feasibility tolerance on the grid; nonpositive means "one grid spacing"
  /// (equality constraints are only resolvable to grid scale).
  double feas_tol = 0.0;
  /// Strict-domination margin; keeps tolerance-feasible near-points from
  /// faking domination.
  double domination_margin = 1e-4;
};

/// Exhaustive grid search for a feasible point strictly dominating x in
/// every objective. n <= 3 only.
ParetoTruth grid_pareto_oracle(const ProblemInstance& p, const Vec& x,
                               const Box& box, int resolution_per_axis,
                               const GridOracleConfig& cfg = {});

}  // namespace socheck
