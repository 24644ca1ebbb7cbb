#include "socheck/problem.hpp"

#include <algorithm>
#include <cmath>

#include "socheck/errors.hpp"
#include "socheck/lp.hpp"

namespace socheck {

PolyhedronSpec PolyhedronSpec::orthant(int dim) {
  if (dim < 0) throw PreconditionFailed("orthant dimension must be >= 0");
  PolyhedronSpec q;
  q.orthant_ = true;
  q.dim_ = dim;
  q.A_ = Mat::Identity(dim, dim);
  q.b_ = Vec::Zero(dim);
  return q;
}

PolyhedronSpec PolyhedronSpec::halfspaces(Mat A, Vec b) {
  if (A.rows() != b.size())
    throw PreconditionFailed("halfspace row/rhs count mismatch");
  PolyhedronSpec q;
  q.orthant_ = false;
  q.dim_ = static_cast<int>(A.cols());
  q.A_ = std::move(A);
  q.b_ = std::move(b);
  return q;
}

bool PolyhedronSpec::contains(const Vec& z, double tol) const {
  if (z.size() != dim_) throw PreconditionFailed("polyhedron dim mismatch");
  for (int i = 0; i < rows(); ++i)
    if (A_.row(i).dot(z) > b_[i] + tol) return false;
  return true;
}

std::vector<int> PolyhedronSpec::active_rows(const Vec& z, double tol) const {
  if (!contains(z, tol)) throw NotInQ("point outside the polyhedron");
  std::vector<int> act;
  for (int i = 0; i < rows(); ++i)
    if (std::abs(A_.row(i).dot(z) - b_[i]) <= tol) act.push_back(i);
  return act;
}

void PolyhedronSpec::validate_interior() const {
  if (dim_ == 0) return;  // zero-dimensional set: trivially fine
  // Maximize the uniform slack s subject to A z + s <= b, s <= 1; a positive
  // optimum certifies a strictly interior point.
  const int n = dim_ + 1;
  std::vector<lp::Constraint> ineqs;
  for (int i = 0; i < rows(); ++i) {
    Vec row(n);
    row.head(dim_) = A_.row(i).transpose();
    row[dim_] = 1.0;
    ineqs.push_back({row, b_[i]});
  }
  std::vector<lp::Bounds> bounds(n, lp::Bounds{-lp::kInf, lp::kInf});
  bounds[dim_] = lp::Bounds{0.0, 1.0};
  Vec c = Vec::Zero(n);
  c[dim_] = -1.0;
  const auto res = lp::minimize(c, {}, ineqs, bounds);
  if (res.status != lp::OptStatus::Optimal || -res.objective <= 1e-9)
    throw PreconditionFailed("polyhedron has empty interior");
}

void ProblemInstance::validate() const {
  if (n <= 0) throw PreconditionFailed("problem dimension must be positive");
  if (objectives.empty())
    throw PreconditionFailed("problem needs at least one objective");
  auto check = [&](const std::vector<FunctionDef>& fns, const char* what) {
    for (const auto& f : fns) {
      if (f.arity != n)
        throw ArityMismatch(std::string(what) + " '" + f.name +
                            "' arity differs from problem dimension");
      validate_arity(f);
    }
  };
  check(objectives, "objective");
  check(equalities, "equality");
  check(qmap, "constraint map");
  if (qset.dim() != num_qmap())
    throw PreconditionFailed(
        "qset dimension does not match constraint map length");
  qset.validate_interior();
}

Vec evaluate_all(const std::vector<FunctionDef>& fns, const Vec& x) {
  Vec v(static_cast<int>(fns.size()));
  for (std::size_t i = 0; i < fns.size(); ++i)
    v[static_cast<int>(i)] = evaluate(fns[i], x);
  return v;
}

Mat jacobian(const std::vector<FunctionDef>& fns, const Vec& x) {
  Mat J(static_cast<int>(fns.size()), x.size());
  for (std::size_t i = 0; i < fns.size(); ++i)
    J.row(static_cast<int>(i)) = gradient(fns[i], x).transpose();
  return J;
}

FeasibilityReport check_feasibility(const ProblemInstance& p, const Vec& x,
                                    double tol) {
  FeasibilityReport rep;
  const double scale = 1.0 + x.norm();
  for (const auto& h : p.equalities)
    rep.equality_residual =
        std::max(rep.equality_residual, std::abs(evaluate(h, x)));
  if (p.num_qmap() > 0) {
    const Vec z = evaluate_all(p.qmap, x);
    for (int i = 0; i < p.qset.rows(); ++i)
      rep.q_violation = std::max(
          rep.q_violation, p.qset.A().row(i).dot(z) - p.qset.b()[i]);
    rep.q_violation = std::max(rep.q_violation, 0.0);
  }
  rep.feasible =
      rep.equality_residual <= tol * scale && rep.q_violation <= tol * scale;
  return rep;
}

}  // namespace socheck
