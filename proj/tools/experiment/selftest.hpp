#pragma once

#include <string>
#include <vector>

namespace ballwidth::experiment {

struct SelftestOptions {
  double norm_perturbation = 0.0;  // fault injection into the basis normalization
  unsigned long long seed = 1;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
};

struct SelftestReport {
  std::vector<CheckResult> checks;
  bool pass() const;
};

SelftestReport run_selftest(const SelftestOptions& opt = {});
std::string selftest_json(const SelftestReport& r, const SelftestOptions& opt,
                          const std::string& hash);

}  // namespace ballwidth::experiment
