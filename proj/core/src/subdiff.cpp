#include "socheck/subdiff.hpp"

#include <algorithm>
#include <cmath>

#include "socheck/errors.hpp"
#include "socheck/sampling.hpp"

namespace socheck {

SubdiffEstimate estimate_subdiff2(const FunctionDef& f, const Vec& base,
                                  const Vec& direction,
                                  const SubdiffConfig& cfg) {
  if (base.size() != f.arity || direction.size() != f.arity)
    throw ArityMismatch(f.name + ": estimate arity mismatch");
  if (cfg.samples_per_radius < 1)
    throw PreconditionFailed("estimate needs at least one sample per radius");
  if (cfg.radii.empty()) throw PreconditionFailed("empty radius schedule");
  for (std::size_t i = 1; i < cfg.radii.size(); ++i)
    if (!(cfg.radii[i] < cfg.radii[i - 1]) || cfg.radii[i] <= 0.0)
      throw PreconditionFailed("radii must be positive and decreasing");

  SubdiffEstimate est;
  est.base = base;
  est.direction = direction;
  est.radius_schedule = cfg.radii;

  Rng rng(cfg.seed);
  for (const double r : cfg.radii) {
    for (int s = 0; s < cfg.samples_per_radius; ++s) {
      const Vec x = rng.ball_point(base, r);
      if (kink_distance(f, x) <= cfg.theta_kink) {
        ++est.discarded;
        continue;
      }
      est.points.push_back(hessian_vec(f, x, direction, cfg.theta_kink));
    }
  }
  if (est.points.empty())
    throw AllSamplesDiscarded(
        f.name + ": every sample fell on the tie filter; perturb the base "
                 "point or use an exact oracle");

  double lip;
  if (cfg.lip_constant) {
    lip = *cfg.lip_constant;
  } else {
    const double r0 = cfg.radii.front();
    Box box{(base.array() - r0).matrix(), (base.array() + r0).matrix()};
    lip = gradient_continuity_probe(f, box, 64, r0 / 8.0, cfg.seed + 1)
              .lipschitz_estimate;
  }
  est.lip_bound = lip * direction.norm();
  return est;
}

Interval support_interval(const SubdiffEstimate& est, const Vec& h) {
  if (est.points.empty()) throw EmptyEstimate("no points in the estimate");
  Interval out{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  for (const Vec& v : est.points) {
    const double s = v.dot(h);
    out.lo = std::min(out.lo, s);
    out.hi = std::max(out.hi, s);
  }
  return out;
}

}  // namespace socheck
