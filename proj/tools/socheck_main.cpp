// Command-line front end: condition checking, subdifferential estimation,
// and the numerical probes, all over problem JSON files.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "socheck/certify.hpp"
#include "socheck/corpus.hpp"
#include "socheck/errors.hpp"
#include "socheck/problem_io.hpp"
#include "socheck/raycalc.hpp"
#include "socheck/separable.hpp"
#include "socheck/subdiff.hpp"

namespace {

using nlohmann::json;
using namespace socheck;

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

json vec_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

OracleMode parse_oracle(const std::string& s) {
  if (s == "auto") return OracleMode::Auto;
  if (s == "separable") return OracleMode::Separable;
  if (s == "sampling") return OracleMode::Sampling;
  throw CLI::ValidationError("--oracle must be auto, separable, or sampling");
}

const FunctionDef& pick_function(const ProblemFile& pf, const std::string& set,
                                 int index) {
  const std::vector<FunctionDef>* fns = nullptr;
  if (set == "obj") fns = &pf.problem.objectives;
  else if (set == "eq") fns = &pf.problem.equalities;
  else if (set == "qmap") fns = &pf.problem.qmap;
  else throw CLI::ValidationError("--set must be obj, eq, or qmap");
  if (index < 0 || index >= static_cast<int>(fns->size()))
    throw PreconditionFailed("function index out of range");
  return (*fns)[index];
}

struct CommonSubdiffFlags {
  int samples = 200;
  std::vector<double> radii = {1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 7781;
  double theta_kink = 1e-8;

  SubdiffConfig config() const {
    SubdiffConfig cfg;
    cfg.samples_per_radius = samples;
    cfg.radii = radii;
    cfg.seed = seed;
    cfg.theta_kink = theta_kink;
    return cfg;
  }
};

void add_subdiff_flags(CLI::App* app, CommonSubdiffFlags& f) {
  app->add_option("--samples", f.samples, "samples per radius");
  app->add_option("--radii", f.radii, "sampling radius schedule")
      ->expected(-1);
  app->add_option("--seed", f.seed, "PRNG seed");
  app->add_option("--theta-kink", f.theta_kink, "tie filter tolerance");
}

int cmd_check(const std::string& path, const std::vector<double>& point,
              const std::string& mode, const std::string& oracle, bool rays,
              int random_dirs, double eta, const CommonSubdiffFlags& sf,
              const std::string& report_path) {
  RunFlags flags;
  if (!point.empty()) flags.point_override = to_vec(point);
  flags.certify.mode =
      mode == "corollary" ? CertifyMode::Corollary : CertifyMode::Theorem;
  flags.certify.oracle = parse_oracle(oracle);
  flags.certify.subdiff = sf.config();
  flags.certify.directions.rays = rays;
  flags.certify.directions.random_count = random_dirs;
  flags.certify.directions.seed = sf.seed;
  if (eta > 0) flags.certify.eta_lp = eta;
  flags.report_path = report_path;
  return run_check(path, flags, std::cout);
}

int cmd_subdiff(const std::string& path, const std::string& set, int fn,
                const std::vector<double>& at, const std::vector<double>& dir,
                const std::vector<double>& h, const CommonSubdiffFlags& sf) {
  const ProblemFile pf = load_problem(path);
  const FunctionDef& f = pick_function(pf, set, fn);
  const Vec base = to_vec(at);
  const Vec d = to_vec(dir);
  const Vec probe = h.empty() ? d : to_vec(h);

  const auto est = estimate_subdiff2(f, base, d, sf.config());
  const auto iv = support_interval(est, probe);
  json out;
  out["base"] = vec_json(est.base);
  out["direction"] = vec_json(est.direction);
  json pts = json::array();
  for (const auto& v : est.points) pts.push_back(vec_json(v));
  out["points"] = pts;
  out["discarded"] = est.discarded;
  out["lip_bound"] = est.lip_bound;
  out["support"] = json{{"h", vec_json(probe)}, {"lo", iv.lo}, {"hi", iv.hi}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_probe(const std::string& path, const std::string& what,
              const std::string& set, int fn, const std::vector<double>& at,
              const std::vector<double>& dir, const std::vector<double>& a,
              const std::vector<double>& b, const std::vector<double>& wbar,
              int segment_samples, const std::string& oracle,
              const CommonSubdiffFlags& sf) {
  const ProblemFile pf = load_problem(path);
  json out;
  out["what"] = what;
  if (what == "wdd2") {
    const std::vector<FunctionDef>& comps =
        set == "qmap" ? pf.problem.qmap
        : set == "eq" ? pf.problem.equalities
                      : pf.problem.objectives;
    const auto cs = weak_dir2(comps, to_vec(at), to_vec(dir));
    json pts = json::array();
    for (const auto& q : cs.points) pts.push_back(vec_json(q));
    out["points"] = pts;
    out["converged"] = cs.converged;
    out["noise_dominated"] = cs.noise_dominated;
  } else if (what == "meanvalue") {
    const FunctionDef& f = pick_function(pf, set, fn);
    const auto rep = mean_value_check(f, to_vec(a), to_vec(b),
                                      segment_samples, parse_oracle(oracle),
                                      sf.config());
    out["residual"] = rep.residual;
    out["bracket"] = json{{"lo", rep.bracket.lo}, {"hi", rep.bracket.hi}};
    out["pass"] = rep.pass;
    out["segment_points"] = rep.segment_points;
  } else if (what == "descent") {
    const FunctionDef& f = pick_function(pf, set, fn);
    out["member"] =
        descent_variation_probe(f, to_vec(at), to_vec(dir), to_vec(wbar));
    out["semantics"] = "true is strong evidence; false is inconclusive";
  } else if (what == "tangent") {
    const auto rep = tangent_variation_check(pf.problem.equalities,
                                             to_vec(at), to_vec(dir),
                                             to_vec(wbar));
    out["lemma_verdict"] = rep.lemma_verdict;
    out["probe_verdict"] = rep.probe_verdict;
    out["lemma_residual"] = rep.lemma_residual;
    out["min_quotient"] = rep.min_quotient;
  } else {
    throw CLI::ValidationError(
        "--what must be wdd2, meanvalue, descent, or tangent");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_corpus(const std::string& mode, const std::string& oracle) {
  CertifyConfig cfg;
  cfg.mode = mode == "corollary" ? CertifyMode::Corollary
                                 : CertifyMode::Theorem;
  cfg.oracle = parse_oracle(oracle);
  const auto results = run_corpus(cfg);
  bool ok = true;
  for (const auto& r : results) {
    const bool entry_ok = r.verdict_ok && r.truth_ok && r.sound;
    ok = ok && entry_ok;
    const char* got = r.got == Overall::Rejected     ? "REJECTED"
                      : r.got == Overall::Consistent ? "CONSISTENT"
                                                     : "DEGENERATE";
    std::cout << (entry_ok ? "[PASS] " : "[FAIL] ") << r.id << " -> " << got
              << (r.verdict_ok ? "" : " (verdict mismatch)")
              << (r.truth_ok ? "" : " (grid truth mismatch)")
              << (r.sound ? "" : " (soundness violation)") << "\n";
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first- and second-order necessary condition checker for "
               "constrained multiobjective problems"};
  app.require_subcommand(1);

  std::string path, report_path, mode = "theorem", oracle = "auto";
  std::string set = "obj", what;
  std::vector<double> point, at, dir, h, a, b, wbar;
  bool rays = false;
  int random_dirs = 16, fn = 0, segment_samples = 33;
  double eta = -1.0;
  CommonSubdiffFlags sf;

  auto* check = app.add_subcommand("check", "run the full verdict");
  check->add_option("file", path, "problem JSON")->required();
  check->add_option("--point", point, "candidate point override")
      ->expected(-1);
  check->add_option("--mode", mode, "theorem or corollary");
  check->add_option("--oracle", oracle, "auto, separable, or sampling");
  check->add_flag("--rays", rays, "enumerate extreme rays of the critical cone");
  check->add_option("--random-dirs", random_dirs, "random unit directions");
  check->add_option("--eta", eta, "second-order LP slack override");
  check->add_option("--report", report_path, "write the report JSON here");
  add_subdiff_flags(check, sf);

  auto* subdiff =
      app.add_subcommand("subdiff", "estimate a second-order subdifferential");
  subdiff->add_option("file", path, "problem JSON")->required();
  subdiff->add_option("--fn", fn, "function index");
  subdiff->add_option("--set", set, "obj, eq, or qmap");
  subdiff->add_option("--at", at, "base point")->required()->expected(-1);
  subdiff->add_option("--dir", dir, "direction")->required()->expected(-1);
  subdiff->add_option("--probe", h, "support probe vector (default: direction)")
      ->expected(-1);
  add_subdiff_flags(subdiff, sf);

  auto* probe = app.add_subcommand("probe", "run a numerical probe");
  probe->add_option("file", path, "problem JSON")->required();
  probe->add_option("--what", what, "wdd2, meanvalue, descent, or tangent")
      ->required();
  probe->add_option("--fn", fn, "function index");
  probe->add_option("--set", set, "obj, eq, or qmap");
  probe->add_option("--at", at, "base point")->expected(-1);
  probe->add_option("--dir", dir, "direction")->expected(-1);
  probe->add_option("--a", a, "segment start (meanvalue)")->expected(-1);
  probe->add_option("--b", b, "segment end (meanvalue)")->expected(-1);
  probe->add_option("--wbar", wbar, "second-order perturbation")->expected(-1);
  probe->add_option("--segment-samples", segment_samples,
                    "segment grid size (meanvalue)");
  probe->add_option("--oracle", oracle, "auto, separable, or sampling");
  add_subdiff_flags(probe, sf);

  bool corpus_all = false;
  auto* corpus = app.add_subcommand("corpus", "run the built-in corpus gate");
  corpus->add_flag("--all", corpus_all, "run every entry (default)");
  corpus->add_option("--mode", mode, "theorem or corollary");
  corpus->add_option("--oracle", oracle, "auto, separable, or sampling");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(path, point, mode, oracle, rays, random_dirs, eta, sf,
                       report_path);
    if (subdiff->parsed()) return cmd_subdiff(path, set, fn, at, dir, h, sf);
    if (probe->parsed())
      return cmd_probe(path, what, set, fn, at, dir, a, b, wbar,
                       segment_samples, oracle, sf);
    if (corpus->parsed()) return cmd_corpus(mode, oracle);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
