#pragma once

#include <string>
#include <vector>

#include "socheck/expr.hpp"

namespace socheck {

/// Polyhedral constraint set for the composite map: either the nonpositive
/// orthant {z <= 0} or a half-space form {z : A z <= b}. The represented set
/// must be nonempty with nonempty interior (validate_interior checks by LP).
class PolyhedronSpec {
 public:
  static PolyhedronSpec orthant(int dim);
  static PolyhedronSpec halfspaces(Mat A, Vec b);

  int dim() const { return dim_; }
  int rows() const { return static_cast<int>(A_.rows()); }
  bool is_orthant() const { return orthant_; }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }

  bool contains(const Vec& z, double tol) const;
  /// Indices of rows with A_i z = b_i within tol (z must be in the set).
  std::vector<int> active_rows(const Vec& z, double tol) const;

  /// Throws PreconditionFailed unless some z satisfies A z < b strictly.
  void validate_interior() const;

 private:
  PolyhedronSpec() = default;
  bool orthant_ = false;
  int dim_ = 0;
  Mat A_;
  Vec b_;
};

/// The constrained multiobjective instance: objectives F, equality map H,
/// constraint map G with polyhedral target set Q, all over R^n.
struct ProblemInstance {
  int n = 0;
  std::vector<FunctionDef> objectives;  // m >= 1
  std::vector<FunctionDef> equalities;  // p >= 0
  std::vector<FunctionDef> qmap;        // k >= 0
  PolyhedronSpec qset = PolyhedronSpec::orthant(0);

  int num_objectives() const { return static_cast<int>(objectives.size()); }
  int num_equalities() const { return static_cast<int>(equalities.size()); }
  int num_qmap() const { return static_cast<int>(qmap.size()); }

  /// Checks arities, objective count, and qset/qmap dimension agreement.
  void validate() const;
};

Vec evaluate_all(const std::vector<FunctionDef>& fns, const Vec& x);
Mat jacobian(const std::vector<FunctionDef>& fns, const Vec& x);

struct FeasibilityReport {
  bool feasible = true;
  double equality_residual = 0.0;  // max |H_l(x)|
  double q_violation = 0.0;        // max over rows of (A G(x) - b)_i, 0 if none
};

/// Feasibility of x for the instance at tolerance tol (scaled internally by
/// 1 + |x|).
FeasibilityReport check_feasibility(const ProblemInstance& p, const Vec& x,
                                    double tol = 1e-7);

}  // namespace socheck
