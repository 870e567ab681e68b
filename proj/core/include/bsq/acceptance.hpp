#pragma once
#include <string>
#include <vector>

namespace bsq {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Suites: all, operators, integrator, dispersion, equivalence, structure,
// mollifier, longtime, longtime-fast, quasilinear, harness.
// Throws ConfigError on an unknown suite name.
std::vector<int> suite_criteria(const std::string& suite, bool& fast);

// Criteria 1..11; `fast` shrinks the long-horizon settings for iteration.
CriterionResult run_criterion(int id, bool fast = false);

std::string criterion_name(int id);

}  // namespace bsq
