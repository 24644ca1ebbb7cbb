#include "socheck/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "socheck/errors.hpp"
#include "socheck/lp.hpp"
#include "socheck/sexpr.hpp"

namespace socheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Variable layout of the certificate LPs:
//   [mu_0..mu_{m-1}] [lambda over support rows] [beta+_0..] [beta-_0..] [s]
// s is the uniform slack of the second-order rows (absent in the pure
// first-order system).
struct LpLayout {
  int m = 0;
  int t = 0;  // number of support rows
  int p = 0;
  bool with_slack = false;

  int mu(int j) const { return j; }
  int lam(int i) const { return m + i; }
  int beta_pos(int l) const { return m + t + l; }
  int beta_neg(int l) const { return m + t + p + l; }
  int slack() const { return m + t + 2 * p; }
  int total() const { return m + t + 2 * p + (with_slack ? 1 : 0); }
};

// Stationarity (n rows) and the normalization sum(mu) + sum(lambda) = 1.
// Restricting the normalization to (mu, lambda) rules out the spurious
// beta+ = beta- solution; with J_H of full row rank every nonzero multiplier
// tuple has (mu, lambda) != 0, so nothing is lost. Returned certificates are
// rescaled to the full normalization afterwards.
std::vector<lp::Constraint> base_equalities(const ProblemInstance& p,
                                            const Vec& x,
                                            const std::vector<int>& support,
                                            const LpLayout& lay) {
  std::vector<lp::Constraint> eqs;
  const Mat jf = jacobian(p.objectives, x);
  const Mat jh = p.num_equalities() > 0 ? jacobian(p.equalities, x)
                                        : Mat::Zero(0, p.n);
  const Mat jg = p.num_qmap() > 0 ? jacobian(p.qmap, x) : Mat::Zero(0, p.n);

  for (int c = 0; c < p.n; ++c) {
    Vec row = Vec::Zero(lay.total());
    for (int j = 0; j < lay.m; ++j) row[lay.mu(j)] = jf(j, c);
    for (int i = 0; i < lay.t; ++i)
      row[lay.lam(i)] = p.qset.A().row(support[i]).dot(jg.col(c));
    for (int l = 0; l < lay.p; ++l) {
      row[lay.beta_pos(l)] = jh(l, c);
      row[lay.beta_neg(l)] = -jh(l, c);
    }
    eqs.push_back({row, 0.0});
  }

  Vec norm_row = Vec::Zero(lay.total());
  for (int j = 0; j < lay.m; ++j) norm_row[lay.mu(j)] = 1.0;
  for (int i = 0; i < lay.t; ++i) norm_row[lay.lam(i)] = 1.0;
  eqs.push_back({norm_row, 1.0});
  return eqs;
}

MultiplierCertificate extract_certificate(const ProblemInstance& p,
                                          const Vec& solution,
                                          const std::vector<int>& support,
                                          const LpLayout& lay,
                                          double raw_margin) {
  MultiplierCertificate cert;
  cert.mu = Vec::Zero(lay.m);
  for (int j = 0; j < lay.m; ++j)
    cert.mu[j] = std::max(0.0, solution[lay.mu(j)]);
  cert.lambda = Vec::Zero(p.qset.rows());
  for (int i = 0; i < lay.t; ++i)
    cert.lambda[support[i]] = std::max(0.0, solution[lay.lam(i)]);
  cert.beta = Vec::Zero(lay.p);
  for (int l = 0; l < lay.p; ++l)
    cert.beta[l] = solution[lay.beta_pos(l)] - solution[lay.beta_neg(l)];

  const double total =
      cert.mu.sum() + cert.lambda.sum() + cert.beta.lpNorm<1>();
  cert.mu /= total;
  cert.lambda /= total;
  cert.beta /= total;
  cert.normalization = 1.0;
  cert.second_order_margin = raw_margin / total;
  return cert;
}

std::vector<int> support_rows(const ProblemInstance& p, const Vec& x,
                              const Vec& d, double tol) {
  std::vector<int> support;
  if (p.num_qmap() == 0) return support;
  const Vec z = evaluate_all(p.qmap, x);
  const Vec dz = jacobian(p.qmap, x) * d;
  for (const int i : p.qset.active_rows(z, tol))
    if (std::abs(p.qset.A().row(i).dot(dz)) <= tol) support.push_back(i);
  return support;
}

}  // namespace

void verify_certificate(const ProblemInstance& p, const Vec& x,
                        const MultiplierCertificate& c, double eta) {
  const double tiny = 1e-9;
  for (int j = 0; j < c.mu.size(); ++j)
    if (c.mu[j] < -tiny) throw NumericalFailure("certificate: negative mu");
  const double tol = critical_tolerance(p, x);
  std::vector<int> active;
  if (p.num_qmap() > 0)
    active = p.qset.active_rows(evaluate_all(p.qmap, x), tol);
  for (int i = 0; i < c.lambda.size(); ++i) {
    if (c.lambda[i] < -tiny)
      throw NumericalFailure("certificate: negative lambda");
    if (c.lambda[i] > tiny &&
        std::find(active.begin(), active.end(), i) == active.end())
      throw NumericalFailure("certificate: lambda on an inactive row");
  }

  Vec res = Vec::Zero(p.n);
  for (int j = 0; j < p.num_objectives(); ++j)
    res += c.mu[j] * gradient(p.objectives[j], x);
  if (p.num_equalities() > 0)
    res += jacobian(p.equalities, x).transpose() * c.beta;
  if (p.num_qmap() > 0)
    res += jacobian(p.qmap, x).transpose() *
           (p.qset.A().transpose() * c.lambda);
  if (res.norm() > eta * 10.0 + 1e-9)
    throw NumericalFailure("certificate: stationarity residual too large");

  const double total = c.mu.sum() + c.lambda.sum() + c.beta.lpNorm<1>();
  if (std::abs(total - 1.0) > 1e-7)
    throw NumericalFailure("certificate: normalization is off");
}

std::optional<MultiplierCertificate> first_order_certificate(
    const ProblemInstance& p, const Vec& x) {
  if (!check_feasibility(p, x).feasible)
    throw InfeasiblePoint("first_order_certificate: infeasible point");
  const double tol = critical_tolerance(p, x);
  std::vector<int> support;
  if (p.num_qmap() > 0)
    support = p.qset.active_rows(evaluate_all(p.qmap, x), tol);

  LpLayout lay{p.num_objectives(), static_cast<int>(support.size()),
               p.num_equalities(), false};
  const auto eqs = base_equalities(p, x, support, lay);
  std::vector<lp::Bounds> bounds(lay.total(), lp::Bounds{0.0, lp::kInf});
  const auto res = lp::feasible_point(eqs, {}, bounds);
  if (res.status == lp::Status::IterationLimit)
    throw NumericalFailure("first-order LP hit the pivot cap");
  if (res.status != lp::Status::Feasible) return std::nullopt;

  auto cert = extract_certificate(p, res.x, support, lay, kInf);
  cert.second_order_margin = kInf;
  verify_certificate(p, x, cert, 1e-6);
  return cert;
}

SecondOrderData collect_direction_data(const ProblemInstance& p, const Vec& x,
                                       const Vec& d, CertifyMode mode,
                                       OracleMode oracle,
                                       const SubdiffConfig& scfg,
                                       const RayConfig& rcfg) {
  SecondOrderData data;
  data.exact_support = true;
  for (const auto& f : p.objectives) {
    const auto q = support_along(f, x, d, d, oracle, scfg);
    data.objective_support.push_back(q.interval);
    data.exact_support = data.exact_support && q.exact;
  }
  data.k_hull = weak_dir2(p.equalities, x, d, rcfg);
  data.m_hull = weak_dir2(p.qmap, x, d, rcfg);

  if (mode == CertifyMode::Corollary) {
    for (const auto& h : p.equalities) {
      const auto q = support_along(h, x, d, d, oracle, scfg);
      data.equality_support.push_back(q.interval);
      data.exact_support = data.exact_support && q.exact;
    }
    // Support intervals of the scalar row functions a_i . G(x) - b_i; for
    // the orthant these are the components of G themselves.
    for (int i = 0; i < p.qset.rows(); ++i) {
      std::vector<Expr> terms;
      for (int c = 0; c < p.num_qmap(); ++c) {
        const double a = p.qset.A()(i, c);
        if (a != 0.0)
          terms.push_back(Expr::constant(a) * p.qmap[c].expr);
      }
      terms.push_back(Expr::constant(-p.qset.b()[i]));
      FunctionDef row_fn{"qrow", p.n, Expr::sum(std::move(terms)), true};
      const auto q = support_along(row_fn, x, d, d, oracle, scfg);
      data.qrow_support.push_back(q.interval);
      data.exact_support = data.exact_support && q.exact;
    }
  }
  return data;
}

std::optional<MultiplierCertificate> second_order_certificate(
    const ProblemInstance& p, const Vec& x, const CriticalDirection& d,
    const SecondOrderData& data, CertifyMode mode, double eta_lp,
    double* margin_out) {
  if (margin_out) *margin_out = -kInf;

  if (!d.regular) {
    // The second-order condition is vacuous along nonregular directions;
    // certify the first-order system only.
    auto cert = first_order_certificate(p, x);
    if (cert) {
      cert->second_order_margin = kInf;
      if (margin_out) *margin_out = kInf;
    }
    return cert;
  }

  if (static_cast<int>(data.objective_support.size()) != p.num_objectives())
    throw PreconditionFailed("second_order_certificate: missing S intervals");
  if (mode == CertifyMode::Corollary &&
      (static_cast<int>(data.equality_support.size()) != p.num_equalities() ||
       static_cast<int>(data.qrow_support.size()) != p.qset.rows()))
    throw PreconditionFailed(
        "second_order_certificate: corollary endpoints missing");

  const double tol = critical_tolerance(p, x);
  const auto support = support_rows(p, x, d.d, tol);
  LpLayout lay{p.num_objectives(), static_cast<int>(support.size()),
               p.num_equalities(), true};

  const auto eqs = base_equalities(p, x, support, lay);
  const Vec zero_p = Vec::Zero(0);
  Vec objective = Vec::Zero(lay.total());
  objective[lay.slack()] = -1.0;  // maximize s

  // One second-order row (with uniform slack s moved to the left):
  //   s - sum_j mu_j S_j^hi - beta.q - lambda.(A_support r) <= 0.
  auto theorem_row = [&](const Vec& q, const Vec& r) {
    Vec row = Vec::Zero(lay.total());
    row[lay.slack()] = 1.0;
    for (int j = 0; j < lay.m; ++j)
      row[lay.mu(j)] = -data.objective_support[j].hi;
    for (int l = 0; l < lay.p; ++l) {
      row[lay.beta_pos(l)] = -q[l];
      row[lay.beta_neg(l)] = q[l];
    }
    if (r.size() > 0)
      for (int i = 0; i < lay.t; ++i)
        row[lay.lam(i)] = -p.qset.A().row(support[i]).dot(r);
    return lp::Constraint{row, 0.0};
  };

  struct Best {
    bool feasible = false;
    double raw_margin = -kInf;
    Vec solution;
  } best;

  auto run = [&](const std::vector<lp::Constraint>& ineqs,
                 const std::vector<lp::Bounds>& bounds) {
    const auto res = lp::minimize(objective, eqs, ineqs, bounds);
    if (res.status == lp::OptStatus::IterationLimit ||
        res.status == lp::OptStatus::Unbounded)
      throw NumericalFailure("second-order LP did not terminate normally");
    if (res.status != lp::OptStatus::Optimal) return;
    const double raw = -res.objective;
    if (!best.feasible || raw > best.raw_margin) {
      best.feasible = true;
      best.raw_margin = raw;
      best.solution = res.x;
    }
  };

  std::vector<lp::Bounds> bounds(lay.total(), lp::Bounds{0.0, lp::kInf});
  bounds[lay.slack()] = lp::Bounds{-lp::kInf, lp::kInf};

  if (mode == CertifyMode::Theorem) {
    std::vector<lp::Constraint> ineqs;
    std::vector<Vec> q_list =
        lay.p == 0 ? std::vector<Vec>{zero_p} : data.k_hull.points;
    std::vector<Vec> r_list = (lay.t == 0 || p.num_qmap() == 0)
                                  ? std::vector<Vec>{Vec()}
                                  : data.m_hull.points;
    for (const Vec& q : q_list)
      for (const Vec& r : r_list) ineqs.push_back(theorem_row(q, r));
    run(ineqs, bounds);
  } else {
    // Corollary: existential endpoints per equality component. The endpoint
    // choice depends on the sign of beta_l, so enumerate sign patterns and
    // keep the best margin.
    if (lay.p > 12)
      throw PreconditionFailed("corollary mode capped at 12 equality rows");
    const int patterns = 1 << lay.p;
    for (int mask = 0; mask < patterns; ++mask) {
      Vec row = Vec::Zero(lay.total());
      row[lay.slack()] = 1.0;
      for (int j = 0; j < lay.m; ++j)
        row[lay.mu(j)] = -data.objective_support[j].hi;
      for (int i = 0; i < lay.t; ++i)
        row[lay.lam(i)] = -data.qrow_support[support[i]].hi;
      auto pattern_bounds = bounds;
      for (int l = 0; l < lay.p; ++l) {
        if (mask & (1 << l)) {
          row[lay.beta_pos(l)] = -data.equality_support[l].hi;
          pattern_bounds[lay.beta_neg(l)] = lp::Bounds{0.0, 0.0};
        } else {
          row[lay.beta_neg(l)] = data.equality_support[l].lo;
          pattern_bounds[lay.beta_pos(l)] = lp::Bounds{0.0, 0.0};
        }
      }
      run({lp::Constraint{row, 0.0}}, pattern_bounds);
    }
  }

  if (!best.feasible) {
    if (margin_out) *margin_out = -kInf;
    return std::nullopt;
  }
  auto cert =
      extract_certificate(p, best.solution, support, lay, best.raw_margin);
  if (margin_out) *margin_out = cert.second_order_margin;
  if (best.raw_margin < -eta_lp) return std::nullopt;
  verify_certificate(p, x, cert, std::max(eta_lp, 1e-8));
  return cert;
}

VerificationReport verdict(const ProblemInstance& p, const Vec& x,
                           const CertifyConfig& cfg) {
  p.validate();
  VerificationReport rep;
  rep.point = x;
  rep.feasibility = check_feasibility(p, x);
  if (!rep.feasibility.feasible) {
    // An infeasible point cannot be weak Pareto efficient for the instance.
    rep.overall = Overall::Rejected;
    return rep;
  }

  const int p_eq = p.num_equalities();
  if (p_eq > 0) {
    const Mat jh = jacobian(p.equalities, x);
    Eigen::ColPivHouseholderQR<Mat> qr(jh.transpose());
    qr.setThreshold(1e-10);
    rep.rank_h = static_cast<int>(qr.rank());
  }
  if (rep.rank_h < p_eq) {
    // Proper-subspace case: any nonzero kernel functional of the equality
    // Jacobian silently certifies every direction.
    rep.degenerate = true;
    rep.overall = Overall::Degenerate;
    const Mat jh = jacobian(p.equalities, x);
    Eigen::FullPivLU<Mat> lu(jh.transpose());
    lu.setThreshold(1e-10);
    MultiplierCertificate cert;
    cert.mu = Vec::Zero(p.num_objectives());
    cert.lambda = Vec::Zero(p.qset.rows());
    Vec beta = lu.kernel().col(0);
    cert.beta = beta / beta.lpNorm<1>();
    cert.normalization = 1.0;
    cert.second_order_margin = kInf;
    rep.first_order = cert;
    return rep;
  }

  rep.first_order = first_order_certificate(p, x);

  DirectionConfig dir_cfg = cfg.directions;
  dir_cfg.ray_cfg = cfg.ray;  // one eps schedule for regularity and clusters
  const auto directions = enumerate_directions(p, x, dir_cfg);
  for (const auto& cd : directions) {
    DirectionVerdict dv;
    dv.direction = cd;
    dv.mode = cfg.mode;
    dv.data = collect_direction_data(p, x, cd.d, cfg.mode, cfg.oracle,
                                     cfg.subdiff, cfg.ray);
    const double eta =
        cfg.eta_lp.value_or(dv.data.exact_support ? 1e-9 : 1e-6);

    // Empty-descent-set shortcut: with grad f_j = 0 and a nonnegative upper
    // support value, the single-objective weight is already a certificate.
    bool direct = false;
    for (int j = 0; j < p.num_objectives() && !direct; ++j) {
      if (gradient(p.objectives[j], x).norm() <= 1e-12 &&
          dv.data.objective_support[j].hi >= 0.0) {
        MultiplierCertificate cert;
        cert.mu = Vec::Zero(p.num_objectives());
        cert.mu[j] = 1.0;
        cert.lambda = Vec::Zero(p.qset.rows());
        cert.beta = Vec::Zero(p.num_equalities());
        cert.normalization = 1.0;
        cert.second_order_margin = dv.data.objective_support[j].hi;
        dv.certificate = cert;
        dv.margin = cert.second_order_margin;
        direct = true;
      }
    }
    if (!direct) {
      double margin = 0.0;
      dv.certificate = second_order_certificate(p, x, cd, dv.data, cfg.mode,
                                                eta, &margin);
      dv.margin = margin;
      dv.refuted = !dv.certificate.has_value() && cd.regular;
    }
    rep.verdicts.push_back(std::move(dv));
  }

  bool any_refuted = false;
  for (const auto& v : rep.verdicts) any_refuted |= v.refuted;
  rep.overall = (!rep.first_order || any_refuted) ? Overall::Rejected
                                                  : Overall::Consistent;
  return rep;
}

}  // namespace socheck
