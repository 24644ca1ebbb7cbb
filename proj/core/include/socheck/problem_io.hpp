#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "socheck/certify.hpp"
#include "socheck/problem.hpp"

namespace socheck {

/// On-disk problem document: the instance plus the candidate point and any
/// user-supplied directions.
struct ProblemFile {
  ProblemInstance problem;
  std::optional<Vec> point;
  std::vector<Vec> directions;
  bool c11_declared = true;
};

/// Parse errors carry a JSON-pointer path to the offending element.
ProblemFile parse_problem_json(const nlohmann::json& j);
ProblemFile load_problem(const std::string& path);

nlohmann::json problem_to_json(const ProblemFile& pf);
void save_problem(const ProblemFile& pf, const std::string& path);

nlohmann::json report_to_json(const VerificationReport& report);

struct RunFlags {
  std::optional<Vec> point_override;
  CertifyConfig certify;
  std::string report_path;  // empty: no file written
};

/// Loads a problem, runs the verdict, serializes the report. Exit code 0 for
/// CONSISTENT/DEGENERATE, 2 for REJECTED (schema/runtime errors throw; the
/// CLI maps them to exit 1).
int run_check(const std::string& path, const RunFlags& flags,
              std::ostream& out);

}  // namespace socheck
