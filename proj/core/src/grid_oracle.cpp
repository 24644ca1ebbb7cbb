#include "socheck/grid_oracle.hpp"

#include <cmath>

#include "socheck/errors.hpp"

namespace socheck {

ParetoTruth grid_pareto_oracle(const ProblemInstance& p, const Vec& x,
                               const Box& box, int resolution_per_axis,
                               const GridOracleConfig& cfg) {
  if (p.n > 3)
    throw PreconditionFailed("grid oracle supports n <= 3 only");
  if (resolution_per_axis < 2)
    throw PreconditionFailed("grid oracle needs at least two points per axis");

  double spacing = 0.0;
  for (int i = 0; i < p.n; ++i)
    spacing = std::max(spacing,
                       (box.hi[i] - box.lo[i]) / (resolution_per_axis - 1));
  const double feas_tol = cfg.feas_tol > 0.0 ? cfg.feas_tol : spacing;

  const Vec fx = evaluate_all(p.objectives, x);

  Vec y(p.n);
  std::vector<int> idx(p.n, 0);
  while (true) {
    for (int i = 0; i < p.n; ++i)
      y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * idx[i] /
                             (resolution_per_axis - 1);

    bool feasible = true;
    for (const auto& h : p.equalities) {
      if (std::abs(evaluate(h, y)) > feas_tol) {
        feasible = false;
        break;
      }
    }
    if (feasible && p.num_qmap() > 0)
      feasible = p.qset.contains(evaluate_all(p.qmap, y), feas_tol);

    if (feasible) {
      bool dominates = true;
      for (int j = 0; j < p.num_objectives(); ++j) {
        if (!(evaluate(p.objectives[j], y) <
              fx[j] - cfg.domination_margin)) {
          dominates = false;
          break;
        }
      }
      if (dominates) return ParetoTruth::NotWeakPareto;
    }

    int axis = 0;
    while (axis < p.n && ++idx[axis] == resolution_per_axis) {
      idx[axis] = 0;
      ++axis;
    }
    if (axis == p.n) break;
  }
  return ParetoTruth::WeakPareto;
}

}  // namespace socheck
