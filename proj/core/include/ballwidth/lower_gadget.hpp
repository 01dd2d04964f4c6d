#pragma once

#include "ballwidth/ball_basis.hpp"
#include "ballwidth/spectral.hpp"
#include "ballwidth/widths.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>

namespace ballwidth {

// Radial C-infinity profile: 1 on [0, a], 0 on [b, inf), same g-quotient as eta.
double bump_profile(double t, double a, double b);
// phi^1: plateau 2/3, support 1; phi^2: plateau 1/4, support 1/2
double bump1(double t);
double bump2(double t);

struct BumpSystem {
  SpaceParams params;
  int m = 0;
  Eigen::MatrixXd centers;  // d x N, grid of spacing 4/m inside |x| <= 2/3
  Eigen::VectorXd c;        // zero-mean corrections
  Eigen::VectorXd norm2;    // ||phi_j||_{2,mu}

  std::int64_t size() const { return centers.cols(); }
  // phi_j(x) = phi^1(m(x - x_j)) - c_j phi^2(m(x - x_j))
  double phi(std::int64_t j, const Point& x) const;
  // F_a = sum_j a_j phi_j
  double eval(const Eigen::VectorXd& a, const Point& x) const;
  // int |phi_j|^p W_mu by nested adaptive radial integration (p = 1 gives |.|, p = 0 unused)
  double integral(std::int64_t j, double p, bool signed_value = false) const;
  double phi_norm(std::int64_t j, double q) const;
  // exact by disjoint supports
  double lq_norm(const Eigen::VectorXd& a, double q) const;
};

BumpSystem build_bump_system(const SpaceParams& params, int m, std::uint64_t seed = 0);

// min/max over random a of ||F_a||_{q,mu} / (m^{-d/q} ||a||_q)
std::pair<double, double> bump_norm_equivalence(const BumpSystem& sys, double q, int trials,
                                                std::uint64_t seed);

struct BernsteinResult {
  double worst_ratio = 0.0;  // max ||F_a^{(rho)}|| / (m^rho ||F_a||)
  double worst_tail = 0.0;   // max relative L2 expansion tail
};

// Expands F_a to degree_cap and compares ||F_a^{(rho)}||_2 with m^rho ||F_a||_2.
BernsteinResult bernstein_check(const BumpSystem& sys, double rho, int trials, int degree_cap,
                                std::uint64_t seed, double tail_budget = 1e-3);

struct LowerDiagnostic {
  double value = 0.0;
  double stderr_ = 0.0;
  int N = 0;  // identity dimension, N = 2n
  WidthEstimate identity;
};

// n^{-rho/d + 1/2 - 1/q} times the empirical identity width of I_N at rank n, N = 2n
LowerDiagnostic lower_bound_diagnostic(const SpaceParams& params, int n, double q, double delta,
                                       std::int64_t M, std::uint64_t seed, int threads = 1);

}  // namespace ballwidth
