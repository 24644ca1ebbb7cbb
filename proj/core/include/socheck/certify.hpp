#pragma once

#include <optional>
#include <vector>

#include "socheck/cones.hpp"
#include "socheck/problem.hpp"
#include "socheck/raycalc.hpp"
#include "socheck/separable.hpp"
#include "socheck/subdiff.hpp"

namespace socheck {

enum class CertifyMode { Theorem, Corollary };

/// A normalized multiplier vector witnessing the necessary conditions at one
/// direction: objective weights mu >= 0, constraint-row weights lambda >= 0
/// supported on active rows, and sign-free equality weights beta, scaled so
/// that sum(mu) + sum(lambda) + sum(|beta|) = 1.
struct MultiplierCertificate {
  Vec mu;
  Vec lambda;
  Vec beta;
  double normalization = 1.0;
  /// Worst second-order row value at this certificate (scale-invariant);
  /// +infinity for first-order-only and vacuous certificates.
  double second_order_margin = 0.0;
};

/// Support intervals and cluster hulls backing one direction's certificate
/// search.
struct SecondOrderData {
  std::vector<Interval> objective_support;  // S_j along d
  bool exact_support = false;               // every interval from the oracle
  ClusterSet k_hull;                        // H'' clusters
  ClusterSet m_hull;                        // G'' clusters
  std::vector<Interval> equality_support;   // corollary endpoints, per h_l
  std::vector<Interval> qrow_support;       // corollary endpoints, per Q row
};

struct DirectionVerdict {
  CriticalDirection direction;
  CertifyMode mode = CertifyMode::Theorem;
  std::optional<MultiplierCertificate> certificate;
  bool refuted = false;
  /// Best attainable worst-row value over the multiplier set (scaled by the
  /// certificate total); -infinity when no multiplier satisfies the
  /// first-order system at all.
  double margin = 0.0;
  SecondOrderData data;
};

enum class Overall { Rejected, Consistent, Degenerate };

struct VerificationReport {
  Vec point;
  FeasibilityReport feasibility;
  int rank_h = 0;
  bool degenerate = false;
  std::optional<MultiplierCertificate> first_order;
  std::vector<DirectionVerdict> verdicts;
  Overall overall = Overall::Consistent;
};

struct CertifyConfig {
  CertifyMode mode = CertifyMode::Theorem;
  OracleMode oracle = OracleMode::Auto;
  SubdiffConfig subdiff;
  RayConfig ray;
  DirectionConfig directions;
  /// Slack on the second-order rows; when unset, 1e-9 with exact oracle
  /// intervals and 1e-6 with sampled ones.
  std::optional<double> eta_lp;
};

/// Fritz-John first-order system at the point (the d = 0 instance of the
/// conditions): stationarity, lambda on active rows only, normalized to rule
/// out the zero multiplier. Returns a certificate or nullopt.
std::optional<MultiplierCertificate> first_order_certificate(
    const ProblemInstance& p, const Vec& x);

/// Gathers the intervals and cluster sets consumed by the certificate LP at
/// one direction.
SecondOrderData collect_direction_data(const ProblemInstance& p, const Vec& x,
                                       const Vec& d, CertifyMode mode,
                                       OracleMode oracle,
                                       const SubdiffConfig& scfg,
                                       const RayConfig& rcfg);

/// Second-order multiplier search at a critical direction. Nonregular
/// directions yield the vacuous certificate (first-order system, margin
/// +infinity). Otherwise a max-slack LP over the normalized multiplier set
/// decides feasibility of the second-order rows; margin_out (when given)
/// receives the best attainable scaled margin even on refutation.
std::optional<MultiplierCertificate> second_order_certificate(
    const ProblemInstance& p, const Vec& x, const CriticalDirection& d,
    const SecondOrderData& data, CertifyMode mode, double eta_lp,
    double* margin_out = nullptr);

/// Re-derives the recorded invariants of a certificate by direct arithmetic:
/// complementarity, stationarity residual, normalization. Throws
/// NumericalFailure on violation; certificate emitters call this before
/// returning.
void verify_certificate(const ProblemInstance& p, const Vec& x,
                        const MultiplierCertificate& c, double eta);

/// Full per-point verdict: feasibility, equality-Jacobian rank gate,
/// first-order system, then the per-direction second-order searches.
VerificationReport verdict(const ProblemInstance& p, const Vec& x,
                           const CertifyConfig& cfg = {});

}  // namespace socheck
