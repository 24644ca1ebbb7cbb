#pragma once

#include <cstdint>
#include <vector>

#include "socheck/expr.hpp"
#include "socheck/separable.hpp"
#include "socheck/subdiff.hpp"

namespace socheck {

/// Cluster values of the second-difference quotient
///   2 [H(x + eps d) - H(x) - eps J_H(x) d] / eps^2
/// as eps decreases. Empty points mark a nonregular direction (the quotient
/// diverged or never settled).
struct ClusterSet {
  int map_dim = 0;
  std::vector<Vec> points;
  std::vector<double> eps_sequence;
  std::vector<Vec> quotients;
  bool converged = false;
  bool noise_dominated = false;

  bool nonempty() const { return map_dim == 0 || !points.empty(); }
};

struct RayConfig {
  /// Strictly decreasing, all above the double-precision noise floor 1e-5.
  std::vector<double> eps_seq;
  double tau_cluster_abs = 1e-3;
  double tau_cluster_rel = 1e-3;
  int tail = 5;

  RayConfig();
};

/// Second-order weak directional derivative of the component map along d,
/// realized as the cluster set of second-difference quotients. Quotients in
/// the catastrophic-cancellation regime (eps^2 below 1e-8 * value scale) are
/// dropped before clustering.
ClusterSet weak_dir2(const std::vector<FunctionDef>& comps, const Vec& base,
                     const Vec& direction, const RayConfig& cfg = {});

struct MeanValueReport {
  double residual = 0.0;
  Interval bracket{0.0, 0.0};
  bool pass = false;
  int segment_points = 0;
};

/// Checks that f(b) - f(a) - <grad f(a), b-a> lands inside half the
/// segment-wide support envelope of the second-order subdifferential along
/// b-a. Segment sampling is refined around detected tie crossings so that
/// every smooth branch contributes to the envelope.
MeanValueReport mean_value_check(const FunctionDef& f, const Vec& a,
                                 const Vec& b, int segment_samples = 33,
                                 OracleMode mode = OracleMode::Auto,
                                 const SubdiffConfig& scfg = {},
                                 double tol = 1e-3);

struct DescentGrid {
  std::vector<double> eps_bar_candidates = {0.3, 0.1, 0.03, 0.01, 0.003,
                                            0.001};
  int eps_probes = 24;
  int w_probes = 8;
  std::uint64_t seed = 99;
};

/// One-sided membership probe for the second-order descent variation set:
/// true means every probed (eps, w) pair satisfied the strict descent
/// inequality for some eps-bar candidate (strong evidence); false is
/// inconclusive by construction.
bool descent_variation_probe(const FunctionDef& f, const Vec& base,
                             const Vec& direction, const Vec& wbar,
                             const DescentGrid& grid = {});

/// <grad f(x), w> + s_hi/2 < 0, with s_hi the upper end of the support
/// interval along the direction (oracle or estimate).
bool wf_membership(const FunctionDef& f, const Vec& base, const Vec& w,
                   double s_hi);

struct TangentReport {
  bool lemma_verdict = false;
  bool probe_verdict = false;
  double lemma_residual = 0.0;  // min over clusters of |J wbar + q/2|
  double min_quotient = 0.0;    // liminf estimate of dist/eps^2
  ClusterSet h2;
};

/// Tangency of x + eps d + eps^2 wbar to the zero set of the component map,
/// tested two ways: the cluster-set criterion (0 in J wbar + H''/2) and a
/// direct distance-quotient probe with Newton projection onto {H = 0}.
/// Requires J_H(base) to have full row rank; throws RankDeficient otherwise.
TangentReport tangent_variation_check(const std::vector<FunctionDef>& comps,
                                      const Vec& base, const Vec& direction,
                                      const Vec& wbar,
                                      const RayConfig& cfg = {},
                                      double tau = 1e-2);

}  // namespace socheck
