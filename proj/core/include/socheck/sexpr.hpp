#pragma once

#include <string>

#include "socheck/expr.hpp"

namespace socheck {

/// Parses a prefix s-expression, e.g.
///   (+ (* 0.5 (* v0 (abs v0))) (pow v1 2))
/// Operators: + (n-ary), * (n-ary, folded left), - (unary negate or binary
/// difference), pow (base, positive integer exponent), abs, max, min, exp,
/// sin, cos. Variables are v0, v1, ...; bare numbers are constants.
Expr parse_sexpr(const std::string& text);

/// Canonical serialization; parse_sexpr(format_sexpr(e)) is structurally
/// identical to e.
std::string format_sexpr(const Expr& e);

}  // namespace socheck
