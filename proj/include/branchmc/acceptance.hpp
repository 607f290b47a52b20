#pragma once

#include <string>
#include <vector>

namespace branchmc::acceptance {

// One line of the acceptance battery. Details carry the measured numbers
// (never wall-clock values, so suite output stays byte-comparable between
// runs).
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::string cli_path;        // binary for the self-invocation checks
  std::string work_dir;        // artifact directory; empty -> temp dir
  double sample_scale = 1.0;   // < 1 shrinks the battery for rehearsals
  unsigned threads = 0;        // 0 = hardware
  bool skip_cli_checks = false;
};

// Runs every criterion with its tolerance pinned in code; results come back
// in criterion order regardless of pass/fail.
std::vector<CriterionResult> run_all(const SuiteOptions& options);

}  // namespace branchmc::acceptance
