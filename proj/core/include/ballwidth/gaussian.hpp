#pragma once

#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/spectral.hpp"

#include <random>

namespace ballwidth {

// sum_{n > N} a_n^d lambda_n^{-rho}: direct sum to 4N plus an integral bound beyond
double spectral_tail(const SpaceParams& params, int N);
// sum_{n >= 1} a_n^d lambda_n^{-rho}
double spectral_total(const SpaceParams& params);
// smallest N with spectral_tail(N) <= tol * spectral_total
int truncation_degree(const SpaceParams& params, double tol = 1e-4);

// Centered Gaussian field with independent coefficients f_hat_{nk} ~ N(0, lambda_n^{-rho}),
// n = 1..N_max; the constant block is zero.
class GaussianSampler {
 public:
  explicit GaussianSampler(const SpaceParams& params, double tail_tolerance = 1e-4);
  GaussianSampler(const SpaceParams& params, int N_max);

  const SpaceParams& params() const { return params_; }
  int max_degree() const { return N_max_; }
  // tail beyond N_max relative to the full spectral sum
  double tail_ratio() const { return tail_ratio_; }
  double variance(int n) const;

  CoeffVector sample(std::mt19937_64& eng) const;

 private:
  SpaceParams params_;
  int N_max_;
  double tail_ratio_;
  Eigen::VectorXd scale_;  // lambda_n^{-rho/2} per flat index
};

}  // namespace ballwidth
