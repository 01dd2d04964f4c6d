#include "ballwidth/widths.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/lq_norm.hpp"
#include "ballwidth/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ballwidth {

std::string to_string(WidthMode m) {
  switch (m) {
    case WidthMode::Probabilistic: return "probabilistic";
    case WidthMode::Average: return "average";
    case WidthMode::LowerDiagnostic: return "lower-diagnostic";
  }
  return "unknown";
}

WidthMode width_mode_from_string(const std::string& s) {
  if (s == "probabilistic") return WidthMode::Probabilistic;
  if (s == "average") return WidthMode::Average;
  if (s == "lower-diagnostic") return WidthMode::LowerDiagnostic;
  throw DomainError("unknown width mode '" + s + "'");
}

std::vector<double> operator_errors(const GaussianSampler& sampler, const CoeffOperator& op,
                                    double q, std::int64_t M, std::uint64_t seed, int threads) {
  // probe the output degree once
  std::mt19937_64 probe = draw_engine(seed, 0);
  const int out_deg = op.apply(sampler.sample(probe)).max_degree();
  const int D = std::max(out_deg, sampler.max_degree());
  const LqNorm norm(sampler.params(), D, q);
  std::vector<double> errors(M);
  parallel_for(M, threads, [&](std::int64_t i) {
    std::mt19937_64 eng = draw_engine(seed, static_cast<std::uint64_t>(i));
    const CoeffVector f = sampler.sample(eng);
    CoeffVector diff = f.resized(D);
    diff -= op.apply(f);
    errors[i] = norm(diff);
  });
  return errors;
}

std::pair<double, double> quantile_estimate(std::vector<double> e, double delta) {
  const auto M = static_cast<std::int64_t>(e.size());
  if (M == 0) throw DomainError("quantile_estimate: no samples");
  std::sort(e.begin(), e.end());
  // order statistic j = ceil((1-delta) M), 1-based
  const auto j = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::ceil((1.0 - delta) * M - 1e-9)), 1, M);
  const auto k = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::sqrt(M * delta * (1.0 - delta)))));
  const auto hi = std::min(M, j + k), lo = std::max<std::int64_t>(1, j - k);
  return {e[j - 1], 0.5 * (e[hi - 1] - e[lo - 1])};
}

std::pair<double, double> power_mean_estimate(const std::vector<double>& e, double p,
                                              int bootstrap, std::uint64_t seed) {
  const auto M = e.size();
  if (M == 0) throw DomainError("power_mean_estimate: no samples");
  auto pm = [&](auto&& idx) {
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) s += std::pow(e[idx(i)], p);
    return std::pow(s / M, 1.0 / p);
  };
  const double value = pm([](std::size_t i) { return i; });
  if (bootstrap <= 1) return {value, 0.0};
  std::mt19937_64 eng = draw_engine(seed ^ 0xb0075a5ull, 0);
  std::uniform_int_distribution<std::size_t> pick(0, M - 1);
  std::vector<double> reps(bootstrap);
  std::vector<std::size_t> idx(M);
  for (int b = 0; b < bootstrap; ++b) {
    for (auto& v : idx) v = pick(eng);
    reps[b] = pm([&](std::size_t i) { return idx[i]; });
  }
  const double mean = std::accumulate(reps.begin(), reps.end(), 0.0) / bootstrap;
  double var = 0.0;
  for (double r : reps) var += (r - mean) * (r - mean);
  return {value, std::sqrt(var / (bootstrap - 1))};
}

WidthEstimate summarize_errors(const std::vector<double>& errors, std::int64_t n, double q,
                               WidthMode mode, double param, std::uint64_t seed, int bootstrap) {
  WidthEstimate w;
  w.n = n;
  w.q = q;
  w.mode = mode;
  w.param = param;
  w.samples = static_cast<std::int64_t>(errors.size());
  w.seed = seed;
  if (mode == WidthMode::Average) {
    std::tie(w.value, w.stderr_) = power_mean_estimate(errors, param, bootstrap, seed);
  } else {
    std::tie(w.value, w.stderr_) = quantile_estimate(errors, param);
  }
  return w;
}

WidthEstimate estimate_width(const GaussianSampler& sampler, const CoeffOperator& op, double q,
                             WidthMode mode, double param, std::int64_t M, std::uint64_t seed,
                             const WidthOptions& opt, std::int64_t n) {
  if (M < 100) throw DomainError("estimate_width: at least 100 samples are required");
  if (mode == WidthMode::Probabilistic) {
    if (!(param > 0 && param < 1)) throw DomainError("estimate_width: delta must lie in (0,1)");
    if (param * M < 10) {
      std::ostringstream msg;
      msg << "estimate_width: quantile unresolvable, delta*M = " << param * M << " < 10";
      throw DomainError(msg.str());
    }
  } else if (mode == WidthMode::Average) {
    if (!(param > 0)) throw DomainError("estimate_width: p must be > 0");
  } else {
    throw DomainError("estimate_width: lower diagnostics are not operator estimates");
  }
  const auto errors = operator_errors(sampler, op, q, M, seed, opt.threads);
  return summarize_errors(errors, n < 0 ? op.rank() : n, q, mode, param, seed, opt.bootstrap);
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& table, RateModel model,
                 std::size_t min_points) {
  if (table.size() < min_points) {
    std::ostringstream msg;
    msg << "rate_fit: need at least " << min_points << " points, got " << table.size();
    throw DomainError(msg.str());
  }
  const std::size_t N = table.size();
  std::vector<double> x(N), y(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto [n, w] = table[i];
    if (!(n > 0 && w > 0)) throw DomainError("rate_fit: n and width must be positive");
    x[i] = std::log(n);
    y[i] = std::log(w);
    if (model == RateModel::PowerTimesSqrtLog) y[i] -= 0.5 * std::log(std::log(std::exp(1.0) * n));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / N;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / N;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw DomainError("rate_fit: degenerate input (all n equal)");
  RateFit fit;
  fit.points = N;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double r = y[i] - fit.intercept - fit.exponent * x[i];
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / N);
  fit.stderr_ = N > 2 ? std::sqrt(rss / (N - 2) / sxx) : 0.0;
  return fit;
}

}  // namespace ballwidth
