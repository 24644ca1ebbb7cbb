#include "socheck/corpus.hpp"

namespace socheck {

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

Expr x_abs_x(int idx) {  // v * |v|
  return Expr::variable(idx) * Expr::abs(Expr::variable(idx));
}

std::vector<CorpusEntry> make_corpus() {
  std::vector<CorpusEntry> out;

  {
    // Scalar objective with an integrated kink: 0.5 x|x| + y^2 at the origin.
    // The origin is not a minimizer (the checker stays consistent because the
    // second-order interval straddles zero); the entry pins estimator
    // accuracy and the honest CONSISTENT outcome.
    CorpusEntry e;
    e.id = "p1";
    e.problem.n = 2;
    e.problem.objectives = {
        {"f", 2, 0.5 * x_abs_x(0) + Expr::int_power(Expr::variable(1), 2)}};
    e.point = vec2(0, 0);
    e.truth = ParetoTruth::NotWeakPareto;
    e.truth_source = TruthSource::Grid;
    e.expected_overall = Overall::Consistent;
    e.oracle_box = {vec2(-1, -1), vec2(1, 1)};
    e.notes = "necessary conditions hold although the point is dominated";
    out.push_back(std::move(e));
  }
  {
    // Concave-convex pair on the line; x = -1 dominates the origin.
    CorpusEntry e;
    e.id = "p2";
    e.problem.n = 1;
    e.problem.objectives = {
        {"f1", 1, Expr::negate(Expr::int_power(Expr::variable(0), 2))},
        {"f2", 1, Expr::variable(0)}};
    e.point = vec1(0);
    e.truth = ParetoTruth::NotWeakPareto;
    e.truth_source = TruthSource::Grid;
    e.expected_overall = Overall::Rejected;
    e.oracle_box = {vec1(-1), vec1(1)};
    e.oracle_resolution = 100001;
    e.notes = "second-order refutation at d = -1";
    out.push_back(std::move(e));
  }
  {
    // Two quadratic bowls trading off along the segment [0,1] x {0}.
    CorpusEntry e;
    e.id = "p3";
    e.problem.n = 2;
    e.problem.objectives = {
        {"f1", 2,
         Expr::int_power(Expr::variable(0), 2) +
             Expr::int_power(Expr::variable(1), 2)},
        {"f2", 2,
         Expr::int_power(Expr::variable(0) - Expr::constant(1), 2) +
             Expr::int_power(Expr::variable(1), 2)}};
    e.point = vec2(0.5, 0);
    e.truth = ParetoTruth::WeakPareto;
    e.truth_source = TruthSource::Grid;
    e.expected_overall = Overall::Consistent;
    e.oracle_box = {vec2(-1, -1), vec2(2, 1)};
    out.push_back(std::move(e));
  }
  {
    // Kinked objective on the half-plane x1 >= 0 (via G = -x1 in -R+).
    CorpusEntry e;
    e.id = "p4";
    e.problem.n = 2;
    e.problem.objectives = {
        {"f", 2, x_abs_x(0) + Expr::int_power(Expr::variable(1), 2)}};
    e.problem.qmap = {{"g", 2, Expr::negate(Expr::variable(0))}};
    e.problem.qset = PolyhedronSpec::orthant(1);
    e.point = vec2(0, 0);
    e.truth = ParetoTruth::WeakPareto;
    e.truth_source = TruthSource::Grid;
    e.expected_overall = Overall::Consistent;
    e.oracle_box = {vec2(-1, -1), vec2(1, 1)};
    out.push_back(std::move(e));
  }
  {
    // Linear objective on the curve x2 = x1 |x1|; descending along the left
    // branch refutes optimality through the equality cluster set.
    CorpusEntry e;
    e.id = "p5";
    e.problem.n = 2;
    e.problem.objectives = {{"f", 2, Expr::variable(1)}};
    e.problem.equalities = {{"h", 2, Expr::variable(1) - x_abs_x(0)}};
    e.point = vec2(0, 0);
    e.truth = ParetoTruth::NotWeakPareto;
    e.truth_source = TruthSource::Grid;
    e.expected_overall = Overall::Rejected;
    e.oracle_box = {vec2(-1, -1), vec2(1, 1)};
    e.notes = "refuting direction d = (-1, 0)";
    out.push_back(std::move(e));
  }
  {
    // Equality Jacobian vanishes at the point: the degenerate branch. The
    // feasible set {x : x^2 = 0} is the single point, so it is trivially
    // weak Pareto; grid scans cannot resolve that, hence the analytic truth.
    CorpusEntry e;
    e.id = "p6";
    e.problem.n = 1;
    e.problem.objectives = {{"f", 1, Expr::variable(0)}};
    e.problem.equalities = {{"h", 1, Expr::int_power(Expr::variable(0), 2)}};
    e.point = vec1(0);
    e.truth = ParetoTruth::WeakPareto;
    e.truth_source = TruthSource::Analytic;
    e.expected_overall = Overall::Degenerate;
    e.oracle_box = {vec1(-1), vec1(1)};
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = make_corpus();
  return corpus;
}

std::vector<CorpusResult> run_corpus(const CertifyConfig& cfg) {
  std::vector<CorpusResult> results;
  for (const auto& entry : builtin_corpus()) {
    CorpusResult r;
    r.id = entry.id;
    const auto report = verdict(entry.problem, entry.point, cfg);
    r.got = report.overall;
    r.verdict_ok = report.overall == entry.expected_overall;

    ParetoTruth oracle_truth = entry.truth;
    if (entry.truth_source == TruthSource::Grid) {
      oracle_truth = grid_pareto_oracle(entry.problem, entry.point,
                                        entry.oracle_box,
                                        entry.oracle_resolution);
      r.truth_ok = oracle_truth == entry.truth;
    } else {
      r.truth_ok = true;
    }

    // Soundness: a rejection must coincide with a dominated point, and a
    // verified weak Pareto point must never be rejected.
    r.sound = true;
    if (report.overall == Overall::Rejected &&
        oracle_truth != ParetoTruth::NotWeakPareto)
      r.sound = false;
    if (oracle_truth == ParetoTruth::WeakPareto &&
        report.overall == Overall::Rejected)
      r.sound = false;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace socheck
