#include "socheck/separable.hpp"

#include <algorithm>
#include <cmath>

#include "socheck/errors.hpp"

namespace socheck {

namespace {

void collect_vars(const Expr& e, std::vector<int>& vars) {
  if (e.kind() == Expr::Kind::Variable) {
    if (std::find(vars.begin(), vars.end(), e.variable_index()) == vars.end())
      vars.push_back(e.variable_index());
  }
  for (const Expr& c : e.children()) collect_vars(c, vars);
}

void split_summands(const Expr& e, std::vector<Expr>& out) {
  if (e.kind() == Expr::Kind::Sum) {
    for (const Expr& c : e.children()) split_summands(c, out);
  } else {
    out.push_back(e);
  }
}

}  // namespace

SeparablePieces separable_decompose(const FunctionDef& f) {
  SeparablePieces pieces;
  pieces.arity = f.arity;
  pieces.per_coordinate.resize(f.arity);

  std::vector<Expr> summands;
  split_summands(f.expr, summands);
  std::vector<std::vector<Expr>> groups(f.arity);
  for (const Expr& term : summands) {
    std::vector<int> vars;
    collect_vars(term, vars);
    if (vars.size() > 1)
      throw NotSeparable(f.name + ": a summand touches " +
                         std::to_string(vars.size()) + " variables");
    if (vars.empty()) continue;  // constants do not affect second derivatives
    groups[vars[0]].push_back(term);
  }
  for (int i = 0; i < f.arity; ++i)
    if (!groups[i].empty())
      pieces.per_coordinate[i] = Expr::sum(std::move(groups[i]));
  return pieces;
}

Interval SeparableSubdiff::support(const Vec& h) const {
  Interval out{0.0, 0.0};
  for (int i = 0; i < base.size(); ++i) {
    const double w = direction[i] * h[i];
    const double a = coeff[i].lo * w;
    const double b = coeff[i].hi * w;
    out.lo += std::min(a, b);
    out.hi += std::max(a, b);
  }
  return out;
}

SeparableSubdiff oracle_subdiff2_separable(const SeparablePieces& pieces,
                                           const Vec& base,
                                           const Vec& direction) {
  if (base.size() != pieces.arity || direction.size() != pieces.arity)
    throw ArityMismatch("separable oracle arity mismatch");
  SeparableSubdiff out;
  out.base = base;
  out.direction = direction;
  out.coeff.resize(pieces.arity);
  for (int i = 0; i < pieces.arity; ++i) {
    if (!pieces.per_coordinate[i]) {
      out.coeff[i] = {0.0, 0.0};
      continue;
    }
    FunctionDef piece{"piece", pieces.arity, *pieces.per_coordinate[i], true};
    const Jet left = one_sided_jet(piece, base, i, -1);
    const Jet right = one_sided_jet(piece, base, i, +1);
    // First derivative in x-units is sigma * c1; a mismatch between sides
    // means the gradient jumps and the construction does not apply.
    const double dl = -left.c1;
    const double dr = right.c1;
    if (std::abs(dl - dr) > 1e-9 * (1.0 + std::abs(dl) + std::abs(dr)))
      throw NotDifferentiable(
          "piece has a first-derivative jump at the base point");
    // One-sided second derivatives are branch values of the (piecewise
    // continuous) second derivative; their hull is the Clarke interval.
    const double sl = 2.0 * left.c2;
    const double sr = 2.0 * right.c2;
    out.coeff[i] = {std::min(sl, sr), std::max(sl, sr)};
  }
  return out;
}

SeparableSubdiff oracle_subdiff2_separable(const FunctionDef& f,
                                           const Vec& base,
                                           const Vec& direction) {
  return oracle_subdiff2_separable(separable_decompose(f), base, direction);
}

SupportQuery support_along(const FunctionDef& f, const Vec& base,
                           const Vec& direction, const Vec& h, OracleMode mode,
                           const SubdiffConfig& cfg) {
  if (mode != OracleMode::Sampling) {
    try {
      const auto oracle = oracle_subdiff2_separable(f, base, direction);
      return {oracle.support(h), true};
    } catch (const NotSeparable&) {
      if (mode == OracleMode::Separable) throw;
    }
  }
  const auto est = estimate_subdiff2(f, base, direction, cfg);
  return {support_interval(est, h), false};
}

}  // namespace socheck
