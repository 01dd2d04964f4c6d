#pragma once

#include "ballwidth/points.hpp"
#include "ballwidth/spectral.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <utility>

namespace ballwidth {

struct CubatureRule {
  SpaceParams params;
  SeparatedSet set;  // product rules carry their nodes here with epsilon = 0
  Eigen::VectorXd weights;
  int exact_degree = -1;
  double residual = std::numeric_limits<double>::quiet_NaN();
  // fitted band of weights against n^{-d}(1/n + sqrt(1-|x|^2))^{2 mu}
  double profile_n = std::numeric_limits<double>::quiet_NaN();
  double profile_c1 = std::numeric_limits<double>::quiet_NaN();
  double profile_c2 = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  std::int64_t floored = 0;  // weights held at the positivity floor

  const Eigen::MatrixXd& points() const { return set.points; }
  std::int64_t size() const { return weights.size(); }
  double profile_ratio() const { return profile_c2 / profile_c1; }
};

double profile_weight(int d, double mu, double n, const double* x);

struct CubatureOptions {
  double floor = 0.05;             // lower bound tau * w0 on every weight
  double mass_samples_factor = 64; // Voronoi-mass samples per point
  std::uint64_t seed = 7;
  double tolerance = 1e-10;        // residual certificate
  int max_active_iterations = 200;
  double profile_n = 0.0;          // 0: degree / 4
};

// Positive weights with sum_xi w_xi phi_{jk}(xi) = int phi_{jk} W_mu for all
// j <= degree. Minimizes sum (w - w0)^2 / w0 subject to the moment equations and
// w >= floor * w0, where w0 is a Voronoi-mass estimate of the local measure.
CubatureRule cubature_weights(const SeparatedSet& set, const SpaceParams& params, int degree,
                              const CubatureOptions& opt = {});

// Voronoi-cell masses of W_mu dx by quasi-random sampling of the hemisphere lift.
Eigen::VectorXd voronoi_mass(const SeparatedSet& set, double mu, std::int64_t samples,
                             std::uint64_t seed);

// Tensor Gauss rule on B^d (d = 1, 2, 3), exact to the given degree for W_mu.
CubatureRule product_rule(const SpaceParams& params, int degree);

// Max relative moment residual of any rule against the orthonormal basis.
double moment_residual(const CubatureRule& rule, int degree);

std::pair<double, double> profile_band(const CubatureRule& rule, double n);

struct RuleSearch {
  double gamma = 1.0;       // initial constant; shrunk by `shrink` on failure
  double shrink = 0.8;
  double min_gamma = 0.05;
  double min_oversampling = 1.2;  // points per moment before a solve is attempted
  std::uint64_t seed = 1;
  std::int64_t max_moments = 6000;
  // shrink gamma until c2/c1 of the weight profile is at most this (0: no bound)
  double max_profile_ratio = 50.0;
  CubatureOptions cubature;
};

// Scale-n rule: maximal (gamma/n)-separated set with weights exact on Pi_{4n}.
// The weight profile is evaluated at the half-separation scale, profile_n = 2/epsilon.
CubatureRule lemma_rule(const SpaceParams& params, int n, const RuleSearch& search = {});

// Rule on a (gamma * scale)-separated set exact to `degree`, shrinking gamma on failure.
// profile_n <= 0 selects 2/epsilon.
CubatureRule search_rule(const SpaceParams& params, double scale, int degree, double profile_n,
                         const RuleSearch& search);

struct MzRatio {
  double low = 0.0;
  double high = 0.0;
};

// min/max over random f in Pi_n of discrete l_{q,w} norm over continuous L_{q,mu} norm
MzRatio mz_ratio(const CubatureRule& rule, int n, double q, int trials, std::uint64_t seed);

// sum w^{-beta} / n^{d(1+beta)}
double weight_sum_check(const CubatureRule& rule, double beta, int n);

struct MzBlockOptions {
  double gamma = 0.0;  // 0: per-dimension default
  int degree = 0;      // 0: 3 * 2^k, the degree needed for T_k U_k = I on Pi_{2^k}
  bool full_degree = false;  // exactness 2^{k+4} instead
  std::uint64_t seed = 1;
  std::int64_t max_moments = 6000;
};

double default_block_gamma(int d);

struct MzBlockData {
  int k = 0;
  double q = 2.0;
  CubatureRule rule;
  Eigen::VectorXd S;  // w^{1/2}
  Eigen::VectorXd V;  // w^{-1/2 + 1/q}
  Eigen::VectorXd R;  // w^{1/q}
};

MzBlockData mz_block_data(const SpaceParams& params, int k, double q,
                          const MzBlockOptions& opt = {});
// rescale an existing block rule for another q
MzBlockData mz_block_scalings(const CubatureRule& rule, int k, double q);

}  // namespace ballwidth
