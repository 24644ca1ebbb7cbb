#pragma once

#include <string>
#include <vector>

#include "socheck/certify.hpp"
#include "socheck/grid_oracle.hpp"

namespace socheck {

enum class TruthSource { Grid, Analytic };

/// One ground-truth instance: a problem, a candidate point, the
/// grid-or-hand-verified Pareto status, and the verdict the checker must
/// produce.
struct CorpusEntry {
  std::string id;
  ProblemInstance problem;
  Vec point;
  ParetoTruth truth = ParetoTruth::WeakPareto;
  TruthSource truth_source = TruthSource::Grid;
  Overall expected_overall = Overall::Consistent;
  Box oracle_box;
  int oracle_resolution = 301;
  std::string notes;
};

const std::vector<CorpusEntry>& builtin_corpus();

struct CorpusResult {
  std::string id;
  Overall got = Overall::Consistent;
  bool verdict_ok = false;
  bool truth_ok = false;  // grid truth reproduced (Analytic entries skip this)
  bool sound = false;     // REJECTED implies NotWeakPareto and vice-versa rules
};

/// Runs every corpus entry through verdict + the grid oracle and evaluates
/// the gate conditions. All three flags must hold on every entry.
std::vector<CorpusResult> run_corpus(const CertifyConfig& cfg = {});

}  // namespace socheck
