#include "ballwidth/gaussian.hpp"

#include "ballwidth/errors.hpp"

#include <cmath>
#include <sstream>

namespace ballwidth {

namespace {

double term(const SpaceParams& p, int n) {
  return static_cast<double>(block_dim(p.d, n)) * std::pow(eigenvalue(p, n), -p.rho());
}

// int_M^inf 2^{d-1}/(d-1)! x^{d-1-2 rho} dx, which dominates the summand tail since
// a_n <= (2n)^{d-1}/(d-1)! for n >= d-1 and lambda_n >= n^2.
double integral_bound(const SpaceParams& p, double M) {
  const double e = 2.0 * p.rho() - p.d;
  return std::exp2(p.d - 1) / std::tgamma(p.d) * std::pow(M, -e) / e;
}

}  // namespace

double spectral_tail(const SpaceParams& p, int N) {
  p.validate();
  const int M = std::max(4 * N, N + p.d + 1);
  double s = 0.0;
  for (int n = N + 1; n <= M; ++n) s += term(p, n);
  return s + integral_bound(p, M);
}

double spectral_total(const SpaceParams& p) {
  double s = 0.0;
  for (int n = 1; n <= 4096; ++n) s += term(p, n);
  return s + integral_bound(p, 4096);
}

int truncation_degree(const SpaceParams& p, double tol) {
  const double total = spectral_total(p);
  for (int N = 1; N <= 1 << 16; ++N)
    if (spectral_tail(p, N) <= tol * total) return N;
  throw ConvergenceError("truncation_degree: tail tolerance not reached below degree 65536");
}

GaussianSampler::GaussianSampler(const SpaceParams& params, double tail_tolerance)
    : GaussianSampler(params, truncation_degree(params, tail_tolerance)) {}

GaussianSampler::GaussianSampler(const SpaceParams& params, int N_max)
    : params_(params), N_max_(N_max) {
  params.validate();
  if (N_max < 1) throw DomainError("GaussianSampler: N_max must be >= 1");
  tail_ratio_ = spectral_tail(params, N_max) / spectral_total(params);
  CoeffVector shape(params, N_max);
  scale_ = Eigen::VectorXd::Zero(shape.size());
  for (int n = 1; n <= N_max; ++n)
    scale_.segment(shape.offset(n), shape.block_size(n))
        .setConstant(std::pow(eigenvalue(params, n), -0.5 * params.rho()));
}

double GaussianSampler::variance(int n) const {
  return n == 0 ? 0.0 : std::pow(eigenvalue(params_, n), -params_.rho());
}

CoeffVector GaussianSampler::sample(std::mt19937_64& eng) const {
  std::normal_distribution<double> normal;
  Eigen::VectorXd c(scale_.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double xi = normal(eng);
    c(i) = scale_(i) * xi;
  }
  return CoeffVector(params_, N_max_, std::move(c));
}

}  // namespace ballwidth
