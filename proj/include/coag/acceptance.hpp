#pragma once

#include <string>
#include <vector>

namespace coag {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::string artifacts_dir;  // empty: use a temporary directory for #14
  int workers = 1;
  bool verbose = true;  // print one pass/fail line per criterion as it runs
};

/// Runs the full acceptance suite; every tolerance is pinned here.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

bool all_passed(const std::vector<CriterionResult>& results);

/// Deterministic artifact set (symbol tables, a solver run with manifest and
/// norm report); used by the determinism criterion and the CLI.
void emit_artifact_set(const std::string& dir, int workers);

}  // namespace coag
