#include "socheck/raycalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "socheck/errors.hpp"
#include "socheck/problem.hpp"
#include "socheck/sampling.hpp"

namespace socheck {

namespace {

std::vector<double> geometric_sequence(double first, double last, int count) {
  std::vector<double> out(count);
  const double ratio = std::pow(last / first, 1.0 / (count - 1));
  double v = first;
  for (int i = 0; i < count; ++i) {
    out[i] = v;
    v *= ratio;
  }
  out.back() = last;
  return out;
}

constexpr double kEpsFloor = 1e-5;

}  // namespace

RayConfig::RayConfig() : eps_seq(geometric_sequence(1e-1, 1e-4, 25)) {}

ClusterSet weak_dir2(const std::vector<FunctionDef>& comps, const Vec& base,
                     const Vec& direction, const RayConfig& cfg) {
  ClusterSet cs;
  cs.map_dim = static_cast<int>(comps.size());
  if (cs.map_dim == 0) {
    cs.converged = true;
    return cs;  // zero-dimensional map: H'' = {()} by convention
  }
  if (cfg.eps_seq.empty())
    throw PreconditionFailed("weak_dir2: empty eps sequence");
  for (std::size_t i = 0; i < cfg.eps_seq.size(); ++i) {
    if (cfg.eps_seq[i] <= kEpsFloor)
      throw PreconditionFailed("weak_dir2: eps below the noise floor 1e-5");
    if (i > 0 && cfg.eps_seq[i] >= cfg.eps_seq[i - 1])
      throw PreconditionFailed("weak_dir2: eps must decrease strictly");
  }

  const Vec h0 = evaluate_all(comps, base);
  const Mat J = jacobian(comps, base);
  const Vec jd = J * direction;

  // Second differences lose all signal once eps^2 reaches the rounding error
  // of the function values; truncate the schedule there.
  const double floor2 = 1e-8 * (1.0 + h0.lpNorm<Eigen::Infinity>());
  for (const double eps : cfg.eps_seq) {
    if (eps * eps < floor2) break;
    const Vec q =
        2.0 * (evaluate_all(comps, base + eps * direction) - h0 - eps * jd) /
        (eps * eps);
    cs.eps_sequence.push_back(eps);
    cs.quotients.push_back(q);
  }
  if (cs.quotients.empty())
    throw PreconditionFailed("weak_dir2: every eps fell below the noise floor");

  const auto tol_for = [&](const Vec& q) {
    return cfg.tau_cluster_abs + cfg.tau_cluster_rel * q.norm();
  };

  // Convergence: the last `tail` quotients agree pairwise.
  const int n_q = static_cast<int>(cs.quotients.size());
  const int tail = std::min(cfg.tail, n_q);
  bool stable = true;
  for (int i = n_q - tail; i < n_q && stable; ++i)
    for (int j = i + 1; j < n_q; ++j)
      if ((cs.quotients[i] - cs.quotients[j]).norm() >
          tol_for(cs.quotients[j])) {
        stable = false;
        break;
      }
  if (stable) {
    Vec mean = Vec::Zero(cs.map_dim);
    for (int i = n_q - tail; i < n_q; ++i) mean += cs.quotients[i];
    cs.points.push_back(mean / tail);
    cs.converged = true;
    return cs;
  }

  // Divergence: monotone norm growth across the tail half of the schedule.
  const int half = n_q / 2;
  bool growing = n_q >= 4;
  for (int i = half; i + 1 < n_q && growing; ++i)
    if (cs.quotients[i + 1].norm() < cs.quotients[i].norm()) growing = false;
  const double g0 = cs.quotients[half].norm();
  const double g1 = cs.quotients[n_q - 1].norm();
  if (growing && g1 > 20.0 * std::max(g0, 1e-12) && g1 > 1.0) {
    cs.noise_dominated = true;
    return cs;  // points left empty
  }

  // Oscillating tail: report greedy cluster representatives.
  for (int i = half; i < n_q; ++i) {
    const Vec& q = cs.quotients[i];
    bool merged = false;
    for (Vec& rep : cs.points) {
      if ((rep - q).norm() <= tol_for(q)) {
        rep = 0.5 * (rep + q);
        merged = true;
        break;
      }
    }
    if (!merged) cs.points.push_back(q);
  }
  return cs;
}

// ---------------------------------------------------------------------------
// Mean value containment
// ---------------------------------------------------------------------------

MeanValueReport mean_value_check(const FunctionDef& f, const Vec& a,
                                 const Vec& b, int segment_samples,
                                 OracleMode mode, const SubdiffConfig& scfg,
                                 double tol) {
  if ((a - b).norm() == 0.0)
    throw PreconditionFailed("mean_value_check: endpoints coincide");
  const Vec h = b - a;
  MeanValueReport rep;
  rep.residual = evaluate(f, b) - evaluate(f, a) - gradient(f, a).dot(h);

  // Sample points of (a, b): a uniform interior grid plus points bracketing
  // every tie crossing, so piecewise-constant branch values all show up in
  // the envelope.
  std::vector<double> ts;
  for (int i = 0; i < segment_samples; ++i)
    ts.push_back((i + 0.5) / segment_samples);
  const int scan = 256;
  std::vector<double> prev = switching_values(f, a + (0.5 / scan) * h);
  for (int s = 1; s < scan; ++s) {
    const double t = (s + 0.5) / scan;
    const std::vector<double> cur = switching_values(f, a + t * h);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (prev[k] == 0.0 || prev[k] * cur[k] >= 0.0) continue;
      double lo = t - 1.0 / scan, hi = t, flo = prev[k];
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = switching_values(f, a + mid * h)[k];
        if (v == 0.0) break;
        if (v * flo > 0.0) {
          lo = mid;
          flo = v;
        } else {
          hi = mid;
        }
      }
      const double cross = 0.5 * (lo + hi);
      for (const double off : {-1e-4, 1e-4}) {
        const double tt = cross + off;
        if (tt > 0.0 && tt < 1.0) ts.push_back(tt);
      }
    }
    prev = cur;
  }

  Interval env{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  for (const double t : ts) {
    const Vec xi = a + t * h;
    const auto q = support_along(f, xi, h, h, mode, scfg);
    env.lo = std::min(env.lo, q.interval.lo);
    env.hi = std::max(env.hi, q.interval.hi);
  }
  rep.segment_points = static_cast<int>(ts.size());
  rep.bracket = {0.5 * env.lo, 0.5 * env.hi};
  rep.pass = rep.bracket.contains(rep.residual, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Variation probes
// ---------------------------------------------------------------------------

bool descent_variation_probe(const FunctionDef& f, const Vec& base,
                             const Vec& direction, const Vec& wbar,
                             const DescentGrid& grid) {
  const double f0 = evaluate(f, base);
  Rng rng(grid.seed);
  for (const double eps_bar : grid.eps_bar_candidates) {
    std::vector<Vec> ws;
    ws.push_back(Vec::Zero(base.size()));
    for (int i = 1; i < grid.w_probes; ++i)
      ws.push_back(rng.ball_point(Vec::Zero(base.size()), 0.999 * eps_bar));
    bool all_descent = true;
    for (int k = 0; k < grid.eps_probes && all_descent; ++k) {
      const double eps =
          eps_bar * std::pow(1e-3, static_cast<double>(k) /
                                       std::max(1, grid.eps_probes - 1));
      for (const Vec& w : ws) {
        const Vec x = base + eps * direction + eps * eps * (wbar + w);
        if (!(evaluate(f, x) < f0)) {
          all_descent = false;
          break;
        }
      }
    }
    if (all_descent) return true;
  }
  return false;
}

bool wf_membership(const FunctionDef& f, const Vec& base, const Vec& w,
                   double s_hi) {
  return gradient(f, base).dot(w) + 0.5 * s_hi < 0.0;
}

namespace {

// Distance from z to {H = 0} via damped Gauss-Newton minimum-norm steps.
// Returns +inf when the iteration fails to converge.
double distance_to_zero_set(const std::vector<FunctionDef>& comps,
                            const Vec& z) {
  Vec y = z;
  const double scale = 1.0 + z.norm();
  for (int it = 0; it < 60; ++it) {
    const Vec r = evaluate_all(comps, y);
    if (r.norm() <= 1e-13 * scale) return (y - z).norm();
    const Mat J = jacobian(comps, y);
    const Mat JJt = J * J.transpose();
    const Vec s = JJt.ldlt().solve(r);
    Vec step = J.transpose() * s;
    double alpha = 1.0;
    while (alpha > 1e-6 &&
           evaluate_all(comps, y - alpha * step).norm() >= r.norm())
      alpha *= 0.5;
    if (alpha <= 1e-6) return std::numeric_limits<double>::infinity();
    y -= alpha * step;
  }
  const Vec r = evaluate_all(comps, y);
  if (r.norm() <= 1e-10 * scale) return (y - z).norm();
  return std::numeric_limits<double>::infinity();
}

}  // namespace

TangentReport tangent_variation_check(const std::vector<FunctionDef>& comps,
                                      const Vec& base, const Vec& direction,
                                      const Vec& wbar, const RayConfig& cfg,
                                      double tau) {
  const int p = static_cast<int>(comps.size());
  const Mat J = jacobian(comps, base);
  Eigen::ColPivHouseholderQR<Mat> qr(J.transpose());
  if (qr.rank() < p)
    throw RankDeficient("tangent check: J_H is not of full row rank");

  TangentReport rep;
  rep.h2 = weak_dir2(comps, base, direction, cfg);

  const Vec jd = J * direction;
  const Vec jw = J * wbar;
  const bool d_tangent = jd.norm() <= 1e-7 * (1.0 + J.norm() * direction.norm());

  rep.lemma_residual = std::numeric_limits<double>::infinity();
  for (const Vec& q : rep.h2.points)
    rep.lemma_residual = std::min(rep.lemma_residual, (jw + 0.5 * q).norm());
  double qmax = 0.0;
  for (const Vec& q : rep.h2.points) qmax = std::max(qmax, q.norm());
  const double tau_lemma = 1e-3 * (1.0 + jw.norm() + 0.5 * qmax);
  rep.lemma_verdict =
      d_tangent && !rep.h2.points.empty() && rep.lemma_residual <= tau_lemma;

  rep.min_quotient = std::numeric_limits<double>::infinity();
  for (const double eps : cfg.eps_seq) {
    const Vec z = base + eps * direction + eps * eps * wbar;
    const double dist = distance_to_zero_set(comps, z);
    rep.min_quotient = std::min(rep.min_quotient, dist / (eps * eps));
  }
  rep.probe_verdict = rep.min_quotient <= tau;
  return rep;
}

}  // namespace socheck
