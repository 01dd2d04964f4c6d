#pragma once

#include "ballwidth/gaussian.hpp"
#include "ballwidth/operators.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ballwidth {

enum class WidthMode { Probabilistic, Average, LowerDiagnostic };

std::string to_string(WidthMode m);
WidthMode width_mode_from_string(const std::string& s);

struct WidthEstimate {
  std::int64_t n = 0;
  double q = 2.0;
  WidthMode mode = WidthMode::Average;
  double param = 2.0;  // delta (probabilistic) or p (average)
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

struct WidthOptions {
  int threads = 1;
  int bootstrap = 200;
};

// e_i = ||f_i - A f_i||_{q,mu} for M independent draws; draw i uses draw_engine(seed, i)
std::vector<double> operator_errors(const GaussianSampler& sampler, const CoeffOperator& op,
                                    double q, std::int64_t M, std::uint64_t seed, int threads = 1);

// (1-delta)-quantile by order statistic, stderr from the order-statistic band
std::pair<double, double> quantile_estimate(std::vector<double> errors, double delta);
// (mean e^p)^{1/p} with bootstrap stderr
std::pair<double, double> power_mean_estimate(const std::vector<double>& errors, double p,
                                              int bootstrap, std::uint64_t seed);

WidthEstimate summarize_errors(const std::vector<double>& errors, std::int64_t n, double q,
                               WidthMode mode, double param, std::uint64_t seed,
                               int bootstrap = 200);

// Requires M >= 100 and, in probabilistic mode, delta * M >= 10.
WidthEstimate estimate_width(const GaussianSampler& sampler, const CoeffOperator& op, double q,
                             WidthMode mode, double param, std::int64_t M, std::uint64_t seed,
                             const WidthOptions& opt = {}, std::int64_t n = -1);

enum class RateModel { PurePower, PowerTimesSqrtLog };

struct RateFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of log residuals
  std::size_t points = 0;
};

RateFit rate_fit(const std::vector<std::pair<double, double>>& table, RateModel model,
                 std::size_t min_points = 4);

}  // namespace ballwidth
