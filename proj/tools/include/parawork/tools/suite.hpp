#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "parawork/tools/json_out.hpp"

namespace parawork::tools {

struct SuiteOptions {
  bool quick = false;       ///< smaller samples, same checks and tolerances
  std::vector<int> only;    ///< criterion ids to run; empty runs all
  std::uint64_t seed = 20241017;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

inline constexpr int kCriterionCount = 10;

/// Throws BadConfig for an id outside 1..kCriterionCount.
CriterionResult run_criterion(int id, const SuiteOptions& opt);
std::vector<CriterionResult> run_suite(const SuiteOptions& opt);

/// One line per criterion: status, id, name, time, detail.
void print_table(std::ostream& os, const std::vector<CriterionResult>& results, bool color);
json suite_json(const std::vector<CriterionResult>& results);

}  // namespace parawork::tools
