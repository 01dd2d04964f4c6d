#pragma once

#include "manifest.hpp"

#include "ballwidth/diagonal.hpp"
#include "ballwidth/widths.hpp"

#include <string>
#include <vector>

namespace ballwidth::experiment {

struct FitSummary {
  double q = 2.0;
  RateModel model = RateModel::PurePower;
  RateFit fit;
};

struct WidthRun {
  std::vector<WidthEstimate> rows;
  std::vector<std::int64_t> ranks;  // operator rank per row
  std::vector<FitSummary> fits;     // one per q, plus the sqrt-log model for q = inf
  double theory_slope = 0.0;        // -rho/d + 1/2
  int sampler_degree = 0;
};

// max(1e-4 tail truncation, 4 x the largest degree the n grid reaches); the tail
// criterion alone (N = 6 at d = 1, rho = 3) leaves S_n exact for n >= N
int auto_sampler_degree(const ExperimentManifest& m);

// Block rules are loaded from m.block_rules/block_<k>.csv when set; a missing
// file raises MissingBlockRule.
WidthRun run_widths(const ExperimentManifest& m);

std::string block_rule_path(const std::string& dir, int k);

// width rows followed by one "fit" row per q (value = exponent, stderr = its stderr,
// samples = fitted points)
std::string widths_csv(const WidthRun& run, const std::string& hash);
std::string widths_summary_json(const ExperimentManifest& m, const WidthRun& run);

struct DiagRow {
  int n = 0;
  double q = 2.0;
  double empirical = 0.0;  // (1-delta)-quantile
  double stderr_ = 0.0;
  double bound = 0.0;      // certified upper bound
  double moment = 0.0;     // exact q-th moment (finite q)
};

// D = diag(k^{-alpha}), k = 1..dim; alpha = 0 is the identity
std::vector<DiagRow> run_diag_widths(int dim, double alpha, const std::vector<int>& n_grid,
                                     const std::vector<double>& q, double delta, std::int64_t M,
                                     std::uint64_t seed, int threads);
std::string diag_csv(const std::vector<DiagRow>& rows, const std::string& hash);

struct LowerRow {
  int n = 0;
  double q = 2.0;
  double value = 0.0;
  double stderr_ = 0.0;
  int N = 0;
  double identity = 0.0;
};

std::vector<LowerRow> run_lower_diag(const SpaceParams& p, const std::vector<int>& n_grid,
                                     const std::vector<double>& q, double delta, std::int64_t M,
                                     std::uint64_t seed, int threads);
std::string lower_csv(const std::vector<LowerRow>& rows, double theory_slope,
                      const std::string& hash);

}  // namespace ballwidth::experiment
