#include "socheck/cones.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/QR>

#include "socheck/errors.hpp"
#include "socheck/lp.hpp"
#include "socheck/sampling.hpp"

namespace socheck {

double critical_tolerance(const ProblemInstance& p, const Vec& x) {
  double g = 0.0;
  for (const auto& f : p.objectives) g += gradient(f, x).squaredNorm();
  return 1e-7 * (1.0 + std::sqrt(g));
}

std::vector<Vec> normal_cone_rep(const PolyhedronSpec& q, const Vec& z,
                                 double tol) {
  std::vector<Vec> gens;
  for (const int i : q.active_rows(z, tol))
    gens.push_back(q.A().row(i).transpose());
  return gens;
}

bool feasible_cone_membership(const PolyhedronSpec& q, const Vec& z,
                              const Vec& v, double tol) {
  for (const int i : q.active_rows(z, tol))
    if (q.A().row(i).dot(v) > tol) return false;
  return true;
}

namespace {

void require_feasible(const ProblemInstance& p, const Vec& x) {
  if (!check_feasibility(p, x).feasible)
    throw InfeasiblePoint("base point violates the constraints");
}

}  // namespace

std::optional<CriticalDirection> is_critical(const ProblemInstance& p,
                                             const Vec& x, const Vec& d,
                                             const RayConfig& ray_cfg) {
  require_feasible(p, x);
  const double tol = critical_tolerance(p, x);

  CriticalDirection cd;
  cd.d = d;
  cd.objective_slacks = Vec(p.num_objectives());
  for (int j = 0; j < p.num_objectives(); ++j) {
    cd.objective_slacks[j] = gradient(p.objectives[j], x).dot(d);
    if (cd.objective_slacks[j] > tol) return std::nullopt;
  }
  if (p.num_equalities() > 0) {
    cd.equality_residual = (jacobian(p.equalities, x) * d).norm();
    if (cd.equality_residual > tol) return std::nullopt;
  }
  if (p.num_qmap() > 0) {
    const Vec z = evaluate_all(p.qmap, x);
    cd.active_rows = p.qset.active_rows(z, tol);
    const Vec dz = jacobian(p.qmap, x) * d;
    for (const int i : cd.active_rows)
      if (p.qset.A().row(i).dot(dz) > tol) return std::nullopt;
  }
  cd.regular = is_regular(p, x, d, ray_cfg);
  return cd;
}

bool is_regular(const ProblemInstance& p, const Vec& x, const Vec& d,
                const RayConfig& ray_cfg) {
  if (p.num_equalities() > 0 &&
      !weak_dir2(p.equalities, x, d, ray_cfg).nonempty())
    return false;
  if (p.num_qmap() > 0) {
    if (!weak_dir2(p.qmap, x, d, ray_cfg).nonempty()) return false;
    const double tol = critical_tolerance(p, x);
    const Vec z = evaluate_all(p.qmap, x);
    const Vec dz = jacobian(p.qmap, x) * d;
    if (!feasible_cone_membership(p.qset, z, dz, tol)) return false;
  }
  return true;
}

double qcirc_support(const PolyhedronSpec& q, const Vec& z, const Vec& dz,
                     const Vec& zstar, double tol) {
  if (!feasible_cone_membership(q, z, dz, tol))
    throw PreconditionFailed(
        "qcirc_support: dz is not in the feasible cone of Q at z");
  if (zstar.lpNorm<Eigen::Infinity>() <= tol) return 0.0;
  if (std::abs(zstar.dot(dz)) > tol * (1.0 + dz.norm()) * (1.0 + zstar.norm()))
    return std::numeric_limits<double>::infinity();

  // z* must be a nonnegative combination of the active rows.
  const auto act = q.active_rows(z, tol);
  if (act.empty()) return std::numeric_limits<double>::infinity();
  std::vector<lp::Constraint> eqs;
  for (int c = 0; c < q.dim(); ++c) {
    Vec row(static_cast<int>(act.size()));
    for (std::size_t i = 0; i < act.size(); ++i)
      row[static_cast<int>(i)] = q.A()(act[i], c);
    eqs.push_back({row, zstar[c]});
  }
  std::vector<lp::Bounds> bounds(act.size(), lp::Bounds{0.0, lp::kInf});
  const auto res = lp::feasible_point(eqs, {}, bounds);
  return res.status == lp::Status::Feasible
             ? 0.0
             : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Direction enumeration
// ---------------------------------------------------------------------------

namespace {

void combinations_rec(int first, int need, int total, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (need == 0) {
    out.push_back(cur);
    return;
  }
  for (int i = first; i <= total - need; ++i) {
    cur.push_back(i);
    combinations_rec(i + 1, need - 1, total, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> combinations(int total, int size) {
  std::vector<std::vector<int>> out;
  if (size < 0 || size > total) return out;
  std::vector<int> cur;
  combinations_rec(0, size, total, cur, out);
  return out;
}

// Extreme-direction candidates of {d : M d <= 0, E d = 0}: a signed basis of
// the lineality space plus rays of the pointed part, found by combinatorial
// active sets in the reduced subspace.
std::vector<Vec> cone_ray_candidates(const Mat& M, const Mat& E, int n) {
  std::vector<Vec> rays;

  Mat stacked(M.rows() + E.rows(), n);
  if (M.rows() > 0) stacked.topRows(M.rows()) = M;
  if (E.rows() > 0) stacked.bottomRows(E.rows()) = E;

  Eigen::FullPivLU<Mat> lu_all(stacked);
  lu_all.setThreshold(1e-10);
  const Mat lineality = lu_all.kernel();  // n x dim(L); junk column if dim 0
  const bool has_lineality = lu_all.dimensionOfKernel() > 0;
  if (has_lineality) {
    for (int c = 0; c < lineality.cols(); ++c) {
      Vec v = lineality.col(c).normalized();
      rays.push_back(v);
      rays.push_back(-v);
    }
  }

  // Basis of null(E) intersected with the orthogonal complement of L.
  Mat ne;
  if (E.rows() == 0) {
    ne = Mat::Identity(n, n);
  } else {
    Eigen::FullPivLU<Mat> lu_e(E);
    lu_e.setThreshold(1e-10);
    if (lu_e.dimensionOfKernel() == 0) return rays;
    ne = lu_e.kernel();
  }
  Mat v_basis;
  if (has_lineality) {
    Eigen::HouseholderQR<Mat> qr_l(lineality);
    const Mat lq =
        qr_l.householderQ() * Mat::Identity(n, lineality.cols());
    Mat proj = ne - lq * (lq.transpose() * ne);
    Eigen::ColPivHouseholderQR<Mat> qr_p(proj);
    qr_p.setThreshold(1e-10);
    const int q = static_cast<int>(qr_p.rank());
    if (q == 0) return rays;
    v_basis = qr_p.householderQ() * Mat::Identity(n, q);
  } else {
    Eigen::ColPivHouseholderQR<Mat> qr_p(ne);
    qr_p.setThreshold(1e-10);
    const int q = static_cast<int>(qr_p.rank());
    if (q == 0) return rays;
    v_basis = qr_p.householderQ() * Mat::Identity(n, q);
  }

  const int q = static_cast<int>(v_basis.cols());
  const Mat G = M * v_basis;  // rows x q
  const int rows = static_cast<int>(G.rows());
  const double tol = 1e-9;

  for (const auto& subset : combinations(rows, q - 1)) {
    Mat gs(q - 1, q);
    for (std::size_t i = 0; i < subset.size(); ++i)
      gs.row(static_cast<int>(i)) = G.row(subset[i]);
    Eigen::FullPivLU<Mat> lu(gs);
    lu.setThreshold(1e-10);
    if (lu.dimensionOfKernel() != 1) continue;
    Vec y = lu.kernel().col(0).normalized();
    for (const double sign : {1.0, -1.0}) {
      const Vec cand = sign * y;
      bool inside = true;
      for (int r = 0; r < rows && inside; ++r)
        if (G.row(r).dot(cand) > tol) inside = false;
      if (inside) rays.push_back(v_basis * cand);
    }
  }
  return rays;
}

}  // namespace

std::vector<CriticalDirection> enumerate_directions(
    const ProblemInstance& p, const Vec& x, const DirectionConfig& cfg) {
  require_feasible(p, x);
  const double tol = critical_tolerance(p, x);

  std::vector<Vec> candidates = cfg.user_directions;

  Rng rng(cfg.seed);
  for (int i = 0; i < cfg.random_count; ++i)
    candidates.push_back(rng.unit_sphere(p.n));

  if (cfg.rays && p.n <= 6) {
    Mat M(p.num_objectives(), p.n);
    for (int j = 0; j < p.num_objectives(); ++j)
      M.row(j) = gradient(p.objectives[j], x).transpose();
    if (p.num_qmap() > 0) {
      const Vec z = evaluate_all(p.qmap, x);
      const Mat jg = jacobian(p.qmap, x);
      const auto act = p.qset.active_rows(z, tol);
      Mat extra(static_cast<int>(act.size()), p.n);
      for (std::size_t i = 0; i < act.size(); ++i)
        extra.row(static_cast<int>(i)) = p.qset.A().row(act[i]) * jg;
      Mat stacked(M.rows() + extra.rows(), p.n);
      stacked << M, extra;
      M = stacked;
    }
    const Mat E = p.num_equalities() > 0 ? jacobian(p.equalities, x)
                                         : Mat::Zero(0, p.n);
    for (Vec& r : cone_ray_candidates(M, E, p.n))
      candidates.push_back(std::move(r));
  }

  std::vector<CriticalDirection> out;
  auto push_unique = [&](const Vec& d) {
    for (const auto& existing : out)
      if ((existing.d - d).norm() < 1e-9) return;
    if (auto cd = is_critical(p, x, d, cfg.ray_cfg)) out.push_back(*cd);
  };

  for (Vec& c : candidates) {
    const double nrm = c.norm();
    if (nrm < 1e-12) continue;
    push_unique(c / nrm);
  }
  // The zero direction is always critical and carries the first-order system.
  auto zero = is_critical(p, x, Vec::Zero(p.n), cfg.ray_cfg);
  out.push_back(*zero);
  return out;
}

}  // namespace socheck
