#pragma once

#include "ballwidth/widths.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <vector>

namespace ballwidth {

// diag(d_1, ..., d_m), d_1 >= ... >= d_m > 0
struct DiagonalOperator {
  Eigen::VectorXd entries;

  explicit DiagonalOperator(Eigen::VectorXd d);
  static DiagonalOperator identity(int m);
  int m() const { return static_cast<int>(entries.size()); }
};

// (E|g|^q)^{1/q} for a standard normal g
double gaussian_moment_const(double q);

// (E ||Dx - D_n x||_q^q)^{1/q} = C(q) (sum_{k>n} d_k^q)^{1/q}
double diag_moment_exact(const DiagonalOperator& D, int n, double q);

// ||Dx - D_n x||_q for M standard normal draws
std::vector<double> diag_errors(const DiagonalOperator& D, int n, double q, std::int64_t M,
                                std::uint64_t seed, int threads = 1);

struct DiagUpperBound {
  double sigma1 = 0.0;  // (C_bound/(n+1))^{1/beta} >= d_{n+1}
  double sigma2 = 0.0;  // moment bound on the mean
  double K = std::sqrt(2.0);
  double value = 0.0;   // sigma2 + K sigma1 sqrt(ln(2/delta))
};

// Certified upper bound on the (1-delta)-quantile of ||Dx - D_n x||_q. For
// q = inf the mean is bounded through q1 = ln(e^2 m).
DiagUpperBound diag_width_upper(const DiagonalOperator& D, int n, double q, double delta,
                                double beta, double C_bound, double K = std::sqrt(2.0));

// empirical (1-delta)-quantile of ||x - Px||_q, P the rank-n coordinate projector
WidthEstimate identity_width_empirical(int m, int n, double q, double delta, std::int64_t M,
                                       std::uint64_t seed, int threads = 1);

struct ConcentrationFit {
  double K = 0.0;
  double sigma = 0.0;  // Lipschitz constant d_{n+1}
  double mean = 0.0;
  std::vector<double> t;     // sigma, 2 sigma, 3 sigma
  std::vector<double> tail;  // empirical P(|F - mean| >= t)
};

// Smallest K with P(|F - EF| >= t) <= 2 exp(-t^2 / (K^2 sigma^2)) at t = sigma, 2 sigma, 3 sigma.
ConcentrationFit concentration_check(const DiagonalOperator& D, int n, double q, std::int64_t M,
                                     std::uint64_t seed, int threads = 1);

}  // namespace ballwidth
