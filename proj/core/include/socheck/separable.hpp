#pragma once

#include <optional>
#include <vector>

#include "socheck/expr.hpp"
#include "socheck/subdiff.hpp"

namespace socheck {

/// Coordinate-wise decomposition of a separable function f = sum_i phi_i(x_i)
/// (plus a constant). Each piece is a univariate expression in its original
/// variable index.
struct SeparablePieces {
  int arity = 0;
  std::vector<std::optional<Expr>> per_coordinate;  // size == arity
};

/// Splits a sum of univariate terms by coordinate; throws NotSeparable when
/// any summand touches two or more variables.
SeparablePieces separable_decompose(const FunctionDef& f);

/// Exact product-form description of the second-order subdifferential action
/// at the base point: the set {(c_1 d_1, ..., c_n d_n) : c_i in coeff[i]}
/// where coeff[i] is the Clarke interval of the i-th piece's second
/// derivative. Computed from one-sided Taylor jets, so kinks of the DSL class
/// are handled exactly.
struct SeparableSubdiff {
  Vec base;
  Vec direction;
  std::vector<Interval> coeff;  // per-coordinate second-derivative intervals

  /// Exact support interval of <L, h> over the set.
  Interval support(const Vec& h) const;
};

/// Throws NotSeparable for non-separable input and NotDifferentiable when a
/// piece's first derivative jumps at the base point (the construction needs a
/// Lipschitz gradient).
SeparableSubdiff oracle_subdiff2_separable(const FunctionDef& f,
                                           const Vec& base,
                                           const Vec& direction);

SeparableSubdiff oracle_subdiff2_separable(const SeparablePieces& pieces,
                                           const Vec& base,
                                           const Vec& direction);

struct SupportQuery {
  Interval interval;
  bool exact = false;  // true when supplied by the separable oracle
};

/// Support interval of the second-order subdifferential action along h,
/// routed through the requested source. Auto mode prefers the exact oracle
/// and falls back to sampling for non-separable input.
SupportQuery support_along(const FunctionDef& f, const Vec& base,
                           const Vec& direction, const Vec& h, OracleMode mode,
                           const SubdiffConfig& cfg);

}  // namespace socheck
