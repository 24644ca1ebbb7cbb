#include <doctest.h>

#include <cmath>

#include "socheck/lp.hpp"
#include "socheck/sampling.hpp"

using namespace socheck;

namespace {

Vec make_vec(std::initializer_list<double> vals) {
  Vec v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("feasible_point: simplex on the unit simplex") {
  std::vector<lp::Constraint> eqs = {{make_vec({1, 1}), 1.0}};
  std::vector<lp::Bounds> bounds(2, lp::Bounds{0.0, lp::kInf});
  const auto res = lp::feasible_point(eqs, {}, bounds);
  REQUIRE(res.status == lp::Status::Feasible);
  CHECK(res.x.sum() == doctest::Approx(1.0));
  CHECK(res.x.minCoeff() >= -1e-12);
}

TEST_CASE("feasible_point: inconsistent equalities yield a Farkas ray") {
  std::vector<lp::Constraint> eqs = {{make_vec({1, 1}), 1.0},
                                     {make_vec({1, 1}), 2.0}};
  std::vector<lp::Bounds> bounds(2, lp::Bounds{-lp::kInf, lp::kInf});
  const auto res = lp::feasible_point(eqs, {}, bounds);
  REQUIRE(res.status == lp::Status::Infeasible);
  REQUIRE(res.farkas.has_value());
  CHECK(lp::farkas_valid(*res.farkas, eqs, {}, bounds));
  // The ray must kill the coefficient matrix: y1 + y2 = 0 with y.b < 0.
  const Vec& y = res.farkas->y_eq;
  CHECK(std::abs(y[0] + y[1]) <= 1e-9);
  CHECK(y[0] * 1.0 + y[1] * 2.0 < -1e-9);
}

TEST_CASE("feasible_point: infeasible box/inequality combinations") {
  // x1 + x2 <= -1 with x >= 0.
  std::vector<lp::Constraint> ineqs = {{make_vec({1, 1}), -1.0}};
  std::vector<lp::Bounds> bounds(2, lp::Bounds{0.0, lp::kInf});
  const auto res = lp::feasible_point({}, ineqs, bounds);
  REQUIRE(res.status == lp::Status::Infeasible);
  REQUIRE(res.farkas.has_value());
  CHECK(lp::farkas_valid(*res.farkas, {}, ineqs, bounds));

  // Equality crossing two-sided bounds: x = 5, 0 <= x <= 1.
  std::vector<lp::Constraint> eqs = {{make_vec({1}), 5.0}};
  std::vector<lp::Bounds> tight = {{0.0, 1.0}};
  const auto res2 = lp::feasible_point(eqs, {}, tight);
  REQUIRE(res2.status == lp::Status::Infeasible);
  CHECK(lp::farkas_valid(*res2.farkas, eqs, {}, tight));
}

TEST_CASE("minimize: Beale's cycling example terminates under Bland") {
  // min -0.75 x1 + 150 x2 - 0.02 x3 + 6 x4, the classic cycling tableau;
  // optimum -0.05 at x = (1/25, 0, 1, 0).
  std::vector<lp::Constraint> ineqs = {
      {make_vec({0.25, -60.0, -1.0 / 25.0, 9.0}), 0.0},
      {make_vec({0.5, -90.0, -1.0 / 50.0, 3.0}), 0.0},
      {make_vec({0.0, 0.0, 1.0, 0.0}), 1.0}};
  std::vector<lp::Bounds> bounds(4, lp::Bounds{0.0, lp::kInf});
  const Vec c = make_vec({-0.75, 150.0, -0.02, 6.0});
  const auto res = lp::minimize(c, {}, ineqs, bounds);
  REQUIRE(res.status == lp::OptStatus::Optimal);
  CHECK(res.objective == doctest::Approx(-0.05));
}

TEST_CASE("minimize: unbounded detection and bound handling") {
  const Vec c = make_vec({-1.0});
  std::vector<lp::Bounds> free_bounds = {{0.0, lp::kInf}};
  const auto res = lp::minimize(c, {}, {}, free_bounds);
  CHECK(res.status == lp::OptStatus::Unbounded);

  std::vector<lp::Bounds> boxed = {{-2.0, 3.5}};
  const auto res2 = lp::minimize(c, {}, {}, boxed);
  REQUIRE(res2.status == lp::OptStatus::Optimal);
  CHECK(res2.x[0] == doctest::Approx(3.5));
  CHECK(res2.objective == doctest::Approx(-3.5));

  // Negative two-sided range exercises the offset substitution.
  const auto res3 = lp::minimize(make_vec({1.0}), {}, {},
                                 {{lp::Bounds{-7.0, -3.0}}});
  REQUIRE(res3.status == lp::OptStatus::Optimal);
  CHECK(res3.x[0] == doctest::Approx(-7.0));
}

TEST_CASE("minimize: free variables split correctly") {
  // min x subject to x >= -4 encoded as inequality on a free variable.
  std::vector<lp::Constraint> ineqs = {{make_vec({-1.0}), 4.0}};
  std::vector<lp::Bounds> bounds = {{-lp::kInf, lp::kInf}};
  const auto res = lp::minimize(make_vec({1.0}), {}, ineqs, bounds);
  REQUIRE(res.status == lp::OptStatus::Optimal);
  CHECK(res.x[0] == doctest::Approx(-4.0));
}

TEST_CASE("random feasible systems stay feasible; Farkas certifies the rest") {
  Rng rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 6, m = 3;
    std::vector<lp::Constraint> eqs;
    Vec x0(n);
    for (int i = 0; i < n; ++i) x0[i] = rng.uniform(0.0, 2.0);
    for (int r = 0; r < m; ++r) {
      const Vec a = rng.gaussian_vec(n);
      eqs.push_back({a, a.dot(x0)});
    }
    std::vector<lp::Bounds> bounds(n, lp::Bounds{0.0, lp::kInf});
    const auto res = lp::feasible_point(eqs, {}, bounds);
    REQUIRE(res.status == lp::Status::Feasible);
    for (const auto& c : eqs)
      CHECK(std::abs(c.coeffs.dot(res.x) - c.rhs) <= 1e-8);
    CHECK(res.x.minCoeff() >= -1e-10);

    // Now poison one right-hand side against a sign-constrained row.
    std::vector<lp::Constraint> bad = eqs;
    Vec ones = Vec::Ones(n);
    bad.push_back({ones, -1.0});  // sum of nonnegatives cannot be negative
    const auto res2 = lp::feasible_point(bad, {}, bounds);
    REQUIRE(res2.status == lp::Status::Infeasible);
    CHECK(lp::farkas_valid(*res2.farkas, bad, {}, bounds));
  }
}

TEST_CASE("determinism: identical inputs give identical runs") {
  std::vector<lp::Constraint> eqs = {{make_vec({1, 2, 3}), 6.0},
                                     {make_vec({1, -1, 0}), 0.0}};
  std::vector<lp::Bounds> bounds(3, lp::Bounds{0.0, lp::kInf});
  const auto a = lp::feasible_point(eqs, {}, bounds);
  const auto b = lp::feasible_point(eqs, {}, bounds);
  REQUIRE(a.status == lp::Status::Feasible);
  CHECK((a.x - b.x).norm() == 0.0);
}
