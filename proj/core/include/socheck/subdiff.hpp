#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "socheck/expr.hpp"

namespace socheck {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v, double tol = 0.0) const {
    return v >= lo - tol && v <= hi + tol;
  }
};

/// Finite inner approximation of the generalized Hessian action at a point
/// along a direction: the convex hull of Hessian-direction products sampled
/// at nearby twice-differentiable points. Only support-function queries are
/// consumed downstream, so the hull is kept as a point cloud.
struct SubdiffEstimate {
  Vec base;
  Vec direction;
  std::vector<Vec> points;
  std::vector<double> radius_schedule;
  int discarded = 0;        // samples dropped by the kink filter
  double lip_bound = 0.0;   // l_hat * |d|; points obey |v| <= lip_bound*(1+tau)
};

struct SubdiffConfig {
  int samples_per_radius = 200;
  std::vector<double> radii = {1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 7781;
  double theta_kink = 1e-8;
  /// When set, skips the internal Lipschitz probe and uses this constant.
  std::optional<double> lip_constant;
};

/// Samples uniform points in shrinking balls around the base point, discards
/// near-tie samples, and records the Hessian-direction product of the active
/// smooth branch at the rest. Deterministic for a fixed seed. Throws
/// AllSamplesDiscarded when the kink filter eats every sample.
SubdiffEstimate estimate_subdiff2(const FunctionDef& f, const Vec& base,
                                  const Vec& direction,
                                  const SubdiffConfig& cfg = {});

/// [min, max] of <v, h> over the stored points: an inner bracket of the true
/// support interval by convexity.
Interval support_interval(const SubdiffEstimate& est, const Vec& h);

/// Which support-interval source to use: the exact separable oracle, the
/// sampling estimator, or the oracle with a sampling fallback.
enum class OracleMode { Auto, Separable, Sampling };

}  // namespace socheck
