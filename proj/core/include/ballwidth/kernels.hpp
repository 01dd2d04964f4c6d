#pragma once

#include "ballwidth/ball_basis.hpp"
#include "ballwidth/spectral.hpp"

#include <memory>
#include <vector>

namespace ballwidth {

enum class KernelRepresentation { BasisSum, Compact };

// Evaluation recipe for P_n(x,y) and weighted sums sum_j c_j P_j(x,y).
// Compact form integrates the normalized Gegenbauer factor in u against
// (1-u^2)^(mu-1) with a Gauss-Jacobi rule; mu = 0 uses the u = +-1 average.
struct KernelSpec {
  SpaceParams params;
  KernelRepresentation representation = KernelRepresentation::Compact;
  QuadratureRule1D u_rule;  // empty in the mu = 0 limit mode
  bool mu_zero_limit = false;
  std::shared_ptr<const BallBasis> basis;  // BasisSum only

  int max_degree() const;
};

// N_u = ceil(max_degree/2) + 2 nodes for the compact form.
KernelSpec make_kernel_spec(const SpaceParams& params, int max_degree,
                            KernelRepresentation rep = KernelRepresentation::Compact);

double kernel_sum(const BallBasis& basis, int n, const Point& x, const Point& y);
double kernel_sum(const SpaceParams& params, int n, const Point& x, const Point& y);
double kernel_compact(const KernelSpec& spec, int n, const Point& x, const Point& y);

// sum_{j} coeff[j] P_j(x,y), j = 0..coeff.size()-1
double kernel_series(const KernelSpec& spec, const std::vector<double>& coeff, const Point& x,
                     const Point& y);

// sum_{j=2^{k-1}+1}^{2^k} lambda_j^{t/2} P_j(x,y)
std::vector<double> block_kernel_coeffs(const SpaceParams& params, int k, double deriv_order);
double block_kernel(const KernelSpec& spec, int k, const Point& x, const Point& y,
                    double deriv_order = 0.0);
double block_kernel(const SpaceParams& params, int k, const Point& x, const Point& y,
                    double deriv_order = 0.0);

// L_{n,eta}(x,y) = sum_j eta(j/n) P_j(x,y)
std::vector<double> smoothed_kernel_coeffs(int n);
double smoothed_kernel(const KernelSpec& spec, int n, const Point& x, const Point& y);

}  // namespace ballwidth
