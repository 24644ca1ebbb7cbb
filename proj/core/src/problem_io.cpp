#include "socheck/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "socheck/errors.hpp"
#include "socheck/sexpr.hpp"

namespace socheck {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

Vec parse_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(path + "/" + std::to_string(i), "not a number");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<FunctionDef> parse_functions(const json& j, const std::string& path,
                                         int arity, const std::string& prefix,
                                         bool c11) {
  if (!j.is_array()) fail(path, "expected an array of s-expressions");
  std::vector<FunctionDef> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string sub = path + "/" + std::to_string(i);
    if (!j[i].is_string()) fail(sub, "expected an s-expression string");
    try {
      out.push_back(FunctionDef{prefix + std::to_string(i), arity,
                                parse_sexpr(j[i].get<std::string>()), c11});
    } catch (const ParseError& e) {
      fail(sub, e.what());
    }
  }
  return out;
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json interval_to_json(const Interval& iv) {
  return json{{"lo", iv.lo}, {"hi", iv.hi}};
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return json(v);
  return json(nullptr);
}

json certificate_to_json(const MultiplierCertificate& c) {
  return json{{"mu", vec_to_json(c.mu)},
              {"lambda", vec_to_json(c.lambda)},
              {"beta", vec_to_json(c.beta)},
              {"normalization", c.normalization},
              {"second_order_margin", finite_or_null(c.second_order_margin)}};
}

}  // namespace

ProblemFile parse_problem_json(const json& j) {
  if (!j.is_object()) fail("", "problem document must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    fail("/n", "missing or non-integer dimension");
  ProblemFile pf;
  pf.problem.n = j["n"].get<int>();
  pf.c11_declared = j.value("c11_declared", true);

  if (!j.contains("objectives")) fail("/objectives", "missing");
  pf.problem.objectives = parse_functions(j["objectives"], "/objectives",
                                          pf.problem.n, "f", pf.c11_declared);
  if (j.contains("equalities"))
    pf.problem.equalities = parse_functions(j["equalities"], "/equalities",
                                            pf.problem.n, "h",
                                            pf.c11_declared);
  if (j.contains("qmap"))
    pf.problem.qmap = parse_functions(j["qmap"], "/qmap", pf.problem.n, "g",
                                      pf.c11_declared);

  if (j.contains("qset")) {
    const json& q = j["qset"];
    if (!q.is_object()) fail("/qset", "expected an object");
    if (q.contains("orthant")) {
      if (!q["orthant"].is_number_integer())
        fail("/qset/orthant", "expected an integer dimension");
      pf.problem.qset = PolyhedronSpec::orthant(q["orthant"].get<int>());
    } else if (q.contains("A") && q.contains("b")) {
      const json& ja = q["A"];
      if (!ja.is_array() || ja.empty()) fail("/qset/A", "expected rows");
      const Vec b = parse_vector(q["b"], "/qset/b");
      Mat a(static_cast<int>(ja.size()),
            static_cast<int>(ja[0].is_array() ? ja[0].size() : 0));
      for (std::size_t r = 0; r < ja.size(); ++r) {
        const Vec row = parse_vector(ja[r], "/qset/A/" + std::to_string(r));
        if (row.size() != a.cols())
          fail("/qset/A/" + std::to_string(r), "ragged matrix");
        a.row(static_cast<int>(r)) = row.transpose();
      }
      if (b.size() != a.rows()) fail("/qset/b", "row count mismatch with A");
      pf.problem.qset = PolyhedronSpec::halfspaces(std::move(a), b);
    } else {
      fail("/qset", "expected {\"orthant\": k} or {\"A\": ..., \"b\": ...}");
    }
  } else {
    pf.problem.qset = PolyhedronSpec::orthant(pf.problem.num_qmap());
  }

  if (j.contains("point")) pf.point = parse_vector(j["point"], "/point");
  if (j.contains("directions")) {
    const json& dirs = j["directions"];
    if (!dirs.is_array()) fail("/directions", "expected an array of vectors");
    for (std::size_t i = 0; i < dirs.size(); ++i)
      pf.directions.push_back(
          parse_vector(dirs[i], "/directions/" + std::to_string(i)));
  }

  try {
    pf.problem.validate();
  } catch (const Error& e) {
    fail("", e.what());
  }
  if (pf.point && pf.point->size() != pf.problem.n)
    fail("/point", "dimension mismatch");
  for (std::size_t i = 0; i < pf.directions.size(); ++i)
    if (pf.directions[i].size() != pf.problem.n)
      fail("/directions/" + std::to_string(i), "dimension mismatch");
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_problem_json(j);
}

json problem_to_json(const ProblemFile& pf) {
  json j;
  j["n"] = pf.problem.n;
  j["c11_declared"] = pf.c11_declared;
  auto fns = [](const std::vector<FunctionDef>& v) {
    json arr = json::array();
    for (const auto& f : v) arr.push_back(format_sexpr(f.expr));
    return arr;
  };
  j["objectives"] = fns(pf.problem.objectives);
  j["equalities"] = fns(pf.problem.equalities);
  j["qmap"] = fns(pf.problem.qmap);
  if (pf.problem.qset.is_orthant()) {
    j["qset"] = json{{"orthant", pf.problem.qset.dim()}};
  } else {
    json rows = json::array();
    for (int r = 0; r < pf.problem.qset.rows(); ++r)
      rows.push_back(vec_to_json(pf.problem.qset.A().row(r).transpose()));
    j["qset"] = json{{"A", rows}, {"b", vec_to_json(pf.problem.qset.b())}};
  }
  if (pf.point) j["point"] = vec_to_json(*pf.point);
  if (!pf.directions.empty()) {
    json dirs = json::array();
    for (const auto& d : pf.directions) dirs.push_back(vec_to_json(d));
    j["directions"] = dirs;
  }
  return j;
}

void save_problem(const ProblemFile& pf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot write");
  out << problem_to_json(pf).dump(2) << "\n";
}

json report_to_json(const VerificationReport& report) {
  json j;
  j["point"] = vec_to_json(report.point);
  j["feasible"] = report.feasibility.feasible;
  j["rank_H"] = report.rank_h;
  j["first_order"] = report.first_order
                         ? certificate_to_json(*report.first_order)
                         : json(nullptr);
  json dirs = json::array();
  for (const auto& v : report.verdicts) {
    json d;
    d["d"] = vec_to_json(v.direction.d);
    d["critical"] = true;
    d["regular"] = v.direction.regular;
    d["mode"] = v.mode == CertifyMode::Theorem ? "theorem" : "corollary";
    d["certificate"] =
        v.certificate ? certificate_to_json(*v.certificate) : json(nullptr);
    d["margin"] = finite_or_null(v.margin);
    d["refuted"] = v.refuted;
    json data;
    json sj = json::array();
    for (const auto& iv : v.data.objective_support)
      sj.push_back(interval_to_json(iv));
    data["objective_support"] = sj;
    data["exact_support"] = v.data.exact_support;
    json kq = json::array();
    for (const auto& q : v.data.k_hull.points) kq.push_back(vec_to_json(q));
    data["k_points"] = kq;
    json mq = json::array();
    for (const auto& q : v.data.m_hull.points) mq.push_back(vec_to_json(q));
    data["m_points"] = mq;
    d["data"] = data;
    dirs.push_back(d);
  }
  j["directions"] = dirs;
  switch (report.overall) {
    case Overall::Rejected:
      j["overall"] = "REJECTED";
      break;
    case Overall::Consistent:
      j["overall"] = "CONSISTENT";
      break;
    case Overall::Degenerate:
      j["overall"] = "DEGENERATE";
      break;
  }
  return j;
}

int run_check(const std::string& path, const RunFlags& flags,
              std::ostream& out) {
  ProblemFile pf = load_problem(path);
  CertifyConfig cfg = flags.certify;
  for (const auto& d : pf.directions)
    cfg.directions.user_directions.push_back(d);

  Vec point;
  if (flags.point_override)
    point = *flags.point_override;
  else if (pf.point)
    point = *pf.point;
  else
    throw PreconditionFailed(
        "no candidate point: supply \"point\" in the file or --point");
  if (point.size() != pf.problem.n)
    throw PreconditionFailed("candidate point dimension mismatch");

  const auto report = verdict(pf.problem, point, cfg);
  const json rj = report_to_json(report);
  out << rj.dump(2) << "\n";
  if (!flags.report_path.empty()) {
    std::ofstream f(flags.report_path);
    if (!f) throw Error(flags.report_path + ": cannot write report");
    f << rj.dump(2) << "\n";
  }
  return report.overall == Overall::Rejected ? 2 : 0;
}

}  // namespace socheck
