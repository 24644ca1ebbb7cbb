#include <benchmark/benchmark.h>

#include "socheck/certify.hpp"
#include "socheck/corpus.hpp"
#include "socheck/lp.hpp"
#include "socheck/sampling.hpp"
#include "socheck/subdiff.hpp"

namespace {

using namespace socheck;

const CorpusEntry& entry(const char* id) {
  for (const auto& e : builtin_corpus())
    if (e.id == id) return e;
  throw std::runtime_error("missing corpus entry");
}

void BM_SubdiffEstimate(benchmark::State& state) {
  const auto& e = entry("p1");
  Vec d(2);
  d << 1, 0;
  SubdiffConfig cfg;
  for (auto _ : state) {
    auto est = estimate_subdiff2(e.problem.objectives[0], e.point, d, cfg);
    benchmark::DoNotOptimize(est.points.size());
  }
}
BENCHMARK(BM_SubdiffEstimate);

void BM_HessianVec(benchmark::State& state) {
  const auto& e = entry("p1");
  Vec x(2), d(2);
  x << 0.37, -0.21;
  d << 1, 0.5;
  for (auto _ : state) {
    Vec hv = hessian_vec(e.problem.objectives[0], x, d);
    benchmark::DoNotOptimize(hv[0]);
  }
}
BENCHMARK(BM_HessianVec);

void BM_LpFeasible(benchmark::State& state) {
  const int n = 40;
  Rng rng(11);
  std::vector<lp::Constraint> eqs;
  Vec sum = Vec::Zero(n);
  for (int r = 0; r < 10; ++r) {
    Vec a = rng.gaussian_vec(n);
    sum += a;
    eqs.push_back({a, a.sum()});  // x = all-ones is feasible
  }
  std::vector<lp::Bounds> bounds(n, lp::Bounds{0.0, lp::kInf});
  for (auto _ : state) {
    auto res = lp::feasible_point(eqs, {}, bounds);
    benchmark::DoNotOptimize(res.status);
  }
}
BENCHMARK(BM_LpFeasible);

void BM_VerdictEqualityKink(benchmark::State& state) {
  const auto& e = entry("p5");
  CertifyConfig cfg;
  cfg.directions.rays = true;
  cfg.directions.random_count = 4;
  for (auto _ : state) {
    auto rep = verdict(e.problem, e.point, cfg);
    benchmark::DoNotOptimize(rep.overall);
  }
}
BENCHMARK(BM_VerdictEqualityKink);

}  // namespace

BENCHMARK_MAIN();
