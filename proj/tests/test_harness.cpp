#include <doctest.h>

#include <sstream>

#include "socheck/corpus.hpp"
#include "socheck/errors.hpp"
#include "socheck/grid_oracle.hpp"
#include "socheck/problem_io.hpp"

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

const CorpusEntry& entry(const char* id) {
  for (const auto& e : builtin_corpus())
    if (e.id == id) return e;
  throw std::runtime_error("missing corpus entry");
}

const char* kProblemJson = R"json({
  "n": 2,
  "objectives": ["(+ (* 0.5 (* v0 (abs v0))) (pow v1 2))"],
  "equalities": [],
  "qmap": ["(- v0)"],
  "qset": {"orthant": 1},
  "point": [0, 0],
  "directions": [[1, 0]],
  "c11_declared": true
})json";

}  // namespace

TEST_CASE("problem JSON: parse and round trip structurally") {
  const auto pf = parse_problem_json(nlohmann::json::parse(kProblemJson));
  CHECK(pf.problem.n == 2);
  CHECK(pf.problem.num_objectives() == 1);
  CHECK(pf.problem.num_qmap() == 1);
  CHECK(pf.problem.qset.is_orthant());
  REQUIRE(pf.point.has_value());
  CHECK((*pf.point - vec2(0, 0)).norm() == 0.0);
  REQUIRE(pf.directions.size() == 1);

  const auto again = parse_problem_json(problem_to_json(pf));
  CHECK(again.problem.n == pf.problem.n);
  for (int i = 0; i < pf.problem.num_objectives(); ++i)
    CHECK(again.problem.objectives[i].expr.structurally_equal(
        pf.problem.objectives[i].expr));
  for (int i = 0; i < pf.problem.num_qmap(); ++i)
    CHECK(again.problem.qmap[i].expr.structurally_equal(
        pf.problem.qmap[i].expr));
}

TEST_CASE("problem JSON: halfspace qset round trip") {
  nlohmann::json j = nlohmann::json::parse(R"json({
    "n": 1,
    "objectives": ["v0"],
    "qmap": ["v0", "(- v0)"],
    "qset": {"A": [[1, 0], [0, 1], [-1, -1]], "b": [1, 1, 3]},
    "point": [0]
  })json");
  const auto pf = parse_problem_json(j);
  CHECK_FALSE(pf.problem.qset.is_orthant());
  CHECK(pf.problem.qset.rows() == 3);
  const auto again = parse_problem_json(problem_to_json(pf));
  CHECK((again.problem.qset.A() - pf.problem.qset.A()).norm() == 0.0);
}

TEST_CASE("problem JSON: errors carry JSON-pointer paths") {
  auto expect_path = [](const char* text, const char* needle) {
    try {
      parse_problem_json(nlohmann::json::parse(text));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_path(R"json({"objectives": ["v0"]})json", "/n");
  expect_path(R"json({"n": 1, "objectives": ["(bogus)"]})json", "/objectives/0");
  expect_path(R"json({"n": 1, "objectives": ["v0"], "point": [1, 2]})json", "/point");
  expect_path(R"json({"n": 1, "objectives": ["v0"], "qset": {"x": 1}})json", "/qset");
  expect_path(
      R"json({"n": 1, "objectives": ["v0"], "directions": [[1, 0]]})json",
      "/directions/0");
}

TEST_CASE("problem JSON: polyhedron must have interior") {
  // x <= 0 and -x <= 0 forces the degenerate hyperplane {0}.
  nlohmann::json j = nlohmann::json::parse(R"json({
    "n": 1,
    "objectives": ["v0"],
    "qmap": ["v0"],
    "qset": {"A": [[1], [-1]], "b": [0, 0]},
    "point": [0]
  })json");
  CHECK_THROWS_AS(parse_problem_json(j), ParseError);
}

TEST_CASE("report JSON: determinism byte for byte") {
  const auto& e = entry("p5");
  CertifyConfig cfg;
  const auto r1 = report_to_json(verdict(e.problem, e.point, cfg)).dump(2);
  const auto r2 = report_to_json(verdict(e.problem, e.point, cfg)).dump(2);
  CHECK(r1 == r2);
  CHECK(r1.find("\"overall\": \"REJECTED\"") != std::string::npos);
}

TEST_CASE("grid_pareto_oracle: dominated and undominated points") {
  const auto& p2 = entry("p2");
  CHECK(grid_pareto_oracle(p2.problem, p2.point, p2.oracle_box, 10001) ==
        ParetoTruth::NotWeakPareto);

  const auto& p3 = entry("p3");
  CHECK(grid_pareto_oracle(p3.problem, p3.point, p3.oracle_box, 201) ==
        ParetoTruth::WeakPareto);

  ProblemInstance single;
  single.n = 1;
  single.objectives = {{"f", 1, Expr::int_power(Expr::variable(0), 2), true}};
  CHECK(grid_pareto_oracle(single, vec1(0), Box{vec1(-1), vec1(1)}, 1001) ==
        ParetoTruth::WeakPareto);
}

TEST_CASE("grid_pareto_oracle: equality constraints at grid tolerance") {
  const auto& p5 = entry("p5");
  CHECK(grid_pareto_oracle(p5.problem, p5.point, p5.oracle_box, 301) ==
        ParetoTruth::NotWeakPareto);
}

TEST_CASE("corpus gate: every entry passes") {
  for (const auto& r : run_corpus()) {
    INFO("corpus entry ", r.id);
    CHECK(r.verdict_ok);
    CHECK(r.truth_ok);
    CHECK(r.sound);
  }
}

TEST_CASE("run_check: exit codes and report writing") {
  const auto pf = parse_problem_json(nlohmann::json::parse(kProblemJson));
  const std::string path = "harness_tmp_problem.json";
  save_problem(pf, path);

  RunFlags flags;
  std::ostringstream sink;
  CHECK(run_check(path, flags, sink) == 0);
  CHECK(sink.str().find("CONSISTENT") != std::string::npos);

  // Missing candidate point is a usage error.
  auto no_point = pf;
  no_point.point.reset();
  save_problem(no_point, path);
  CHECK_THROWS_AS(run_check(path, flags, sink), PreconditionFailed);

  CHECK_THROWS_AS(run_check("does_not_exist.json", flags, sink), ParseError);
}
