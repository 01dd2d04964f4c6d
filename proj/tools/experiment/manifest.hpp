#pragma once

#include "ballwidth/spectral.hpp"
#include "ballwidth/widths.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ballwidth::experiment {

// JSON schema (all keys optional except where the subcommand needs them):
//   params        {"d": int, "mu": num, "r": num, "s": num}
//   q             [num | "inf"]
//   n_grid        [int]          empty: {8,16,32,64} for d=1, {16,32,64} otherwise
//   mode          "average" | "probabilistic"
//   delta, p      num
//   samples       int            Monte Carlo draws M
//   seed          int
//   threads       int
//   operator      "partial-sum" (rank <= n) | "partial-sum-degree" (S_n) | "near-optimal"
//   epsilon, C1   num            near-optimal schedule
//   input_degree  int            0: sampler truncation degree
//   sampler_degree int           0: auto_sampler_degree
//   block_rules   string         directory of block_<k>.csv rules; empty: build in memory
//   out           string         output directory
//   plot          bool
struct ExperimentManifest {
  SpaceParams params;
  std::vector<double> q{2.0};
  std::vector<int> n_grid;
  WidthMode mode = WidthMode::Average;
  double delta = 0.1;
  double p = 2.0;
  std::int64_t samples = 400;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string op = "partial-sum";
  double epsilon = 0.1;
  double C1 = 0.0;
  int input_degree = 0;
  int sampler_degree = 0;
  std::string block_rules;
  std::string out = ".";
  bool plot = true;

  bool operator==(const ExperimentManifest&) const = default;
};

std::vector<int> default_n_grid(int d);
// n_grid with the default filled in
std::vector<int> effective_grid(const ExperimentManifest& m);

std::string to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const std::string& text);
// FNV-1a of the canonical JSON form
std::string manifest_hash(const ExperimentManifest& m);

}  // namespace ballwidth::experiment
