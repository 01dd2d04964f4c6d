#include "ballwidth/diagonal.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ballwidth {

DiagonalOperator::DiagonalOperator(Eigen::VectorXd d) : entries(std::move(d)) {
  if (entries.size() == 0) throw DomainError("DiagonalOperator: empty");
  for (Eigen::Index i = 0; i < entries.size(); ++i) {
    if (!(entries(i) > 0)) throw DomainError("DiagonalOperator: entries must be positive");
    if (i > 0 && entries(i) > entries(i - 1))
      throw DomainError("DiagonalOperator: entries must be nonincreasing");
  }
}

DiagonalOperator DiagonalOperator::identity(int m) {
  return DiagonalOperator(Eigen::VectorXd::Ones(m));
}

double gaussian_moment_const(double q) {
  // (pi^{-1/2} 2^{q/2} Gamma((q+1)/2))^{1/q}
  return std::exp((-0.5 * std::log(std::numbers::pi) + 0.5 * q * std::log(2.0) +
                   std::lgamma(0.5 * (q + 1.0))) /
                  q);
}

namespace {

double tail_power_sum(const DiagonalOperator& D, int n, double q) {
  double s = 0.0;
  for (int k = n; k < D.m(); ++k) s += std::pow(D.entries(k), q);
  return s;
}

void check_n(const DiagonalOperator& D, int n) {
  if (n < 0 || n > D.m()) throw DomainError("diagonal engine: n must lie in [0, m]");
}

}  // namespace

double diag_moment_exact(const DiagonalOperator& D, int n, double q) {
  check_n(D, n);
  if (!(q >= 2) || std::isinf(q)) throw DomainError("diag_moment_exact: requires 2 <= q < inf");
  const double s = tail_power_sum(D, n, q);
  return s == 0.0 ? 0.0 : gaussian_moment_const(q) * std::pow(s, 1.0 / q);
}

std::vector<double> diag_errors(const DiagonalOperator& D, int n, double q, std::int64_t M,
                                std::uint64_t seed, int threads) {
  check_n(D, n);
  std::vector<double> out(M);
  parallel_for(M, threads, [&](std::int64_t i) {
    std::mt19937_64 eng = draw_engine(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal;
    double acc = 0.0;
    for (int k = 0; k < D.m(); ++k) {
      const double g = normal(eng);
      if (k < n) continue;
      const double v = std::abs(D.entries(k) * g);
      acc = std::isinf(q) ? std::max(acc, v) : acc + std::pow(v, q);
    }
    out[i] = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  });
  return out;
}

DiagUpperBound diag_width_upper(const DiagonalOperator& D, int n, double q, double delta,
                                double beta, double C_bound, double K) {
  check_n(D, n);
  if (!(q >= 2)) throw DomainError("diag_width_upper: requires q >= 2");
  if (!(delta > 0 && delta <= 0.5)) throw DomainError("diag_width_upper: delta in (0, 1/2]");
  if (D.m() < 2 * n) throw DomainError("diag_width_upper: requires m >= 2n");
  if (!(beta > 0)) throw DomainError("diag_width_upper: beta must be > 0");
  const double s = D.entries.array().pow(beta).sum();
  if (s > C_bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "diag_width_upper: hypothesis violated, sum d_i^beta = " << s << " > C = " << C_bound;
    throw DomainError(msg.str());
  }
  DiagUpperBound b;
  b.K = K;
  b.sigma1 = std::pow(C_bound / (n + 1.0), 1.0 / beta);
  if (std::isinf(q)) {
    const double q1 = std::log(std::exp(2.0) * D.m());
    const double t = tail_power_sum(D, n, q1);
    b.sigma2 = t == 0.0 ? 0.0 : gaussian_moment_const(q1) * std::pow(t, 1.0 / q1);
  } else {
    b.sigma2 = diag_moment_exact(D, n, q);
  }
  b.value = b.sigma2 + K * b.sigma1 * std::sqrt(std::log(2.0 / delta));
  return b;
}

WidthEstimate identity_width_empirical(int m, int n, double q, double delta, std::int64_t M,
                                       std::uint64_t seed, int threads) {
  if (m < 2 * n) throw DomainError("identity_width_empirical: requires m >= 2n");
  if (!(delta > 0 && delta < 1)) throw DomainError("identity_width_empirical: delta in (0,1)");
  const auto errors = diag_errors(DiagonalOperator::identity(m), n, q, M, seed, threads);
  return summarize_errors(errors, n, q, WidthMode::Probabilistic, delta, seed);
}

ConcentrationFit concentration_check(const DiagonalOperator& D, int n, double q, std::int64_t M,
                                     std::uint64_t seed, int threads) {
  check_n(D, n);
  if (n >= D.m()) throw DomainError("concentration_check: empty tail");
  const auto F = diag_errors(D, n, q, M, seed, threads);
  ConcentrationFit fit;
  fit.sigma = D.entries(n);
  fit.mean = std::accumulate(F.begin(), F.end(), 0.0) / static_cast<double>(M);
  for (int k = 1; k <= 3; ++k) {
    const double t = k * fit.sigma;
    std::int64_t hits = 0;
    for (double v : F)
      if (std::abs(v - fit.mean) >= t) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(M);
    fit.t.push_back(t);
    fit.tail.push_back(p);
    if (p > 0 && p < 2.0) {
      // 2 exp(-t^2/(K^2 sigma^2)) >= p  <=>  K >= t / (sigma sqrt(ln(2/p)))
      fit.K = std::max(fit.K, t / (fit.sigma * std::sqrt(std::log(2.0 / p))));
    }
  }
  return fit;
}

}  // namespace ballwidth
