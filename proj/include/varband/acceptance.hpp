#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace varband {

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;  // multiplies every tolerance
  std::set<int> only;            // empty: all criteria
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct CriterionInfo {
  int id;
  const char* name;
};

const std::vector<CriterionInfo>& acceptance_criteria();
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// "PASS  4 name: detail (1.2 s)"
std::string format_result(const CriterionResult& r);

}  // namespace varband
