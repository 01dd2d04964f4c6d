#pragma once

#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/cubature.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace ballwidth {

using PointFunction = std::function<double(const Point&)>;

// f_hat_{nk} = sum_xi w_xi f(xi) phi_{nk}(xi). Exact for polynomial f of degree
// <= N; other inputs are aliased.
CoeffVector analyze(const PointFunction& f, const SpaceParams& params, int N,
                    const CubatureRule& rule);
// same, from values of f at the rule nodes
CoeffVector analyze_values(const Eigen::VectorXd& values, const SpaceParams& params, int N,
                           const CubatureRule& rule);

double synth(const CoeffVector& c, const Point& x);
// values at the columns of pts
Eigen::VectorXd synth(const CoeffVector& c, const Eigen::MatrixXd& pts);

CoeffVector partial_sum(const CoeffVector& c, int n);
CoeffVector frac_derivative(const CoeffVector& c, double t);
// (sum_n lambda_n^r |block n|^2)^{1/2}; the constant block must vanish
double sobolev_norm(const CoeffVector& c, double r);

// C-infinity cutoff: 1 on [0,1], 0 on [2,inf)
double eta(double t);

CoeffVector smoothed_operator(const CoeffVector& c, int n);
// delta_1 = S_2, delta_k = S_{2^k} - S_{2^{k-1}}
CoeffVector dyadic_block(const CoeffVector& c, int k);
// degree range of delta_k: [lo, hi]
std::pair<int, int> dyadic_range(int k);
// smallest J with sum_{k<=J} delta_k covering degree N
int dyadic_cover(int N);

class CoeffOperator {
 public:
  virtual ~CoeffOperator() = default;
  virtual CoeffVector apply(const CoeffVector& c) const = 0;
  virtual std::int64_t rank() const = 0;
  virtual std::string name() const = 0;
};

class PartialSumOperator : public CoeffOperator {
 public:
  PartialSumOperator(const SpaceParams& params, int n) : params_(params), n_(n) {}
  CoeffVector apply(const CoeffVector& c) const override { return partial_sum(c, n_); }
  std::int64_t rank() const override { return poly_dim(params_.d, n_); }
  std::string name() const override { return "partial-sum"; }
  int degree() const { return n_; }

 private:
  SpaceParams params_;
  int n_;
};

}  // namespace ballwidth
