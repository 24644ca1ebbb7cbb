#include <doctest.h>

#include <cmath>

#include "socheck/errors.hpp"
#include "socheck/expr.hpp"
#include "socheck/sampling.hpp"
#include "socheck/sexpr.hpp"

using namespace socheck;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

// f(x, y) = 0.5 x|x| + y^2 (gradient (|x|, 2y), Lipschitz but kinked second
// derivative along x).
FunctionDef kink_quadratic() {
  Expr e = 0.5 * (Expr::variable(0) * Expr::abs(Expr::variable(0))) +
           Expr::int_power(Expr::variable(1), 2);
  return {"f", 2, e, true};
}

}  // namespace

TEST_CASE("evaluate: set-theoretic semantics") {
  const auto f = kink_quadratic();
  CHECK(evaluate(f, vec2(0, 0)) == 0.0);
  CHECK(evaluate(f, vec2(2, 1)) == doctest::Approx(3.0));

  FunctionDef m{"m", 1,
                Expr::max(Expr::variable(0), Expr::negate(Expr::variable(0)))};
  CHECK(evaluate(m, vec1(-3)) == 3.0);
}

TEST_CASE("evaluate: arity mismatch throws") {
  const auto f = kink_quadratic();
  CHECK_THROWS_AS(evaluate(f, vec1(1)), ArityMismatch);
}

TEST_CASE("gradient: selection matches the true gradient") {
  const auto f = kink_quadratic();
  // grad f = (|x|, 2y)
  CHECK(gradient(f, vec2(0, 0)).norm() == 0.0);
  const Vec g = gradient(f, vec2(2, 1));
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(2.0));

  FunctionDef a{"a", 1, Expr::abs(Expr::variable(0))};
  CHECK(gradient(a, vec1(0))[0] == 0.0);  // Abs'(0) := 0 selection
}

TEST_CASE("hessian_vec: active branch second derivative") {
  FunctionDef q{"q", 2,
                0.5 * Expr::int_power(Expr::variable(0), 2) +
                    Expr::int_power(Expr::variable(1), 2)};
  const Vec hv = hessian_vec(q, vec2(0.3, -0.7), vec2(1, 0));
  CHECK(hv[0] == doctest::Approx(1.0));
  CHECK(hv[1] == doctest::Approx(0.0));

  const auto f = kink_quadratic();
  const Vec right = hessian_vec(f, vec2(0.5, 0), vec2(1, 0));
  CHECK(right[0] == doctest::Approx(1.0));
  CHECK(right[1] == doctest::Approx(0.0));
  const Vec left = hessian_vec(f, vec2(-0.5, 0), vec2(1, 0));
  CHECK(left[0] == doctest::Approx(-1.0));

  CHECK_THROWS_AS(hessian_vec(f, vec2(0, 0), vec2(1, 0)), OnKink);
}

TEST_CASE("hessian_vec: linear in the direction at smooth points") {
  const auto f = kink_quadratic();
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x = rng.gaussian_vec(2);
    if (kink_distance(f, x) < 1e-3) continue;
    const Vec d1 = rng.gaussian_vec(2);
    const Vec d2 = rng.gaussian_vec(2);
    const double alpha = rng.uniform(-2, 2);
    const Vec lhs = hessian_vec(f, x, alpha * d1 + d2);
    const Vec rhs = alpha * hessian_vec(f, x, d1) + hessian_vec(f, x, d2);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("kink_distance: scaled switching values") {
  FunctionDef a{"a", 1, Expr::abs(Expr::variable(0))};
  CHECK(kink_distance(a, vec1(0)) == 0.0);
  CHECK(kink_distance(a, vec1(0.3)) == doctest::Approx(0.3 / 1.3));

  FunctionDef sq{"sq", 1, Expr::int_power(Expr::variable(0), 2)};
  CHECK(std::isinf(kink_distance(sq, vec1(7))));
}

TEST_CASE("kink_distance: zero exactly on tie sets, continuous nearby") {
  FunctionDef mx{"mx", 2, Expr::max(Expr::variable(0), Expr::variable(1))};
  for (double t = -1.0; t <= 1.0; t += 0.25)
    CHECK(kink_distance(mx, vec2(t, t)) == 0.0);
  // 1-Lipschitz-ish continuity on a grid (switch value |x-y| over 1+|x|).
  for (double x = -1.0; x <= 1.0; x += 0.125) {
    for (double y = -1.0; y <= 1.0; y += 0.125) {
      const double here = kink_distance(mx, vec2(x, y));
      const double near = kink_distance(mx, vec2(x + 0.01, y));
      CHECK(std::abs(here - near) <= 0.025);
    }
  }
}

TEST_CASE("gradient agrees with central finite differences off kinks") {
  std::vector<FunctionDef> smooth = {
      {"poly", 2,
       Expr::int_power(Expr::variable(0), 3) +
           2.0 * (Expr::variable(0) * Expr::variable(1)) +
           Expr::int_power(Expr::variable(1), 2)},
      {"trig", 2,
       Expr::sin(Expr::variable(0)) * Expr::cos(Expr::variable(1)) +
           Expr::exp(0.3 * Expr::variable(0))},
  };
  Rng rng(17);
  const double step = 1e-4;
  for (const auto& f : smooth) {
    for (int t = 0; t < 100; ++t) {
      const Vec x = rng.gaussian_vec(2);
      const Vec g = gradient(f, x);
      for (int i = 0; i < 2; ++i) {
        Vec e = Vec::Zero(2);
        e[i] = step;
        const double fd =
            (evaluate(f, x + e) - evaluate(f, x - e)) / (2 * step);
        CHECK(std::abs(g[i] - fd) <= 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("gradient_continuity_probe") {
  Box box{vec1(-1), vec1(1)};

  FunctionDef c11{"c11", 1,
                  0.5 * (Expr::variable(0) * Expr::abs(Expr::variable(0)))};
  const auto rep1 = gradient_continuity_probe(c11, box, 200, 1e-2);
  CHECK(rep1.c11_consistent);
  CHECK(rep1.lipschitz_estimate == doctest::Approx(1.0).epsilon(0.05));

  FunctionDef notc11{"abs", 1, Expr::abs(Expr::variable(0))};
  const auto rep2 = gradient_continuity_probe(notc11, box, 200, 1e-2);
  CHECK_FALSE(rep2.c11_consistent);

  FunctionDef sq{"sq", 1, Expr::int_power(Expr::variable(0), 2)};
  const auto rep3 = gradient_continuity_probe(sq, box, 200, 1e-2);
  CHECK(rep3.c11_consistent);
  CHECK(rep3.lipschitz_estimate == doctest::Approx(2.0).epsilon(0.01));

  // max of branches with mismatched slopes at the crossing: gradient jumps.
  FunctionDef crossing{
      "mx", 1,
      Expr::max(Expr::variable(0), 0.5 * Expr::variable(0))};
  const auto rep4 = gradient_continuity_probe(crossing, box, 200, 1e-2);
  CHECK_FALSE(rep4.c11_consistent);
}

TEST_CASE("one_sided_jet resolves branches exactly") {
  FunctionDef a{"a", 1, Expr::abs(Expr::variable(0))};
  const Jet right = one_sided_jet(a, vec1(0), 0, +1);
  CHECK(right.c1 == 1.0);  // |t| = t on the right
  const Jet left = one_sided_jet(a, vec1(0), 0, -1);
  CHECK(left.c1 == 1.0);  // |-t| = t in ray units

  FunctionDef xax{"xax", 1,
                  Expr::variable(0) * Expr::abs(Expr::variable(0))};
  CHECK(2.0 * one_sided_jet(xax, vec1(0), 0, +1).c2 == 2.0);
  CHECK(2.0 * one_sided_jet(xax, vec1(0), 0, -1).c2 == -2.0);
}

TEST_CASE("sexpr: parse, format, round trip") {
  const std::string text = "(+ (* 0.5 (* v0 (abs v0))) (pow v1 2))";
  const Expr e = parse_sexpr(text);
  CHECK(e.kind() == Expr::Kind::Sum);
  FunctionDef f{"f", 2, e, true};
  CHECK(evaluate(f, vec2(2, 1)) == doctest::Approx(3.0));

  const Expr again = parse_sexpr(format_sexpr(e));
  CHECK(again.structurally_equal(e));

  const Expr mixed = parse_sexpr("(- (max v0 (min v1 1.5)) (sin v0))");
  CHECK(parse_sexpr(format_sexpr(mixed)).structurally_equal(mixed));
}

TEST_CASE("sexpr: parse errors carry positions") {
  CHECK_THROWS_AS(parse_sexpr("(bogus v0)"), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(pow v0 0)"), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(pow v0 1.5)"), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(+ v0"), ParseError);
  CHECK_THROWS_AS(parse_sexpr(""), ParseError);
  CHECK_THROWS_AS(parse_sexpr("(abs v0) v1"), ParseError);
}

TEST_CASE("validate_arity") {
  FunctionDef bad{"bad", 1, Expr::variable(1), true};
  CHECK_THROWS_AS(validate_arity(bad), ArityMismatch);
}
