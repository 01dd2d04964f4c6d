#include "ballwidth/gaussian.hpp"
#include "ballwidth/operators.hpp"
#include "ballwidth/parallel.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ballwidth;

namespace {

double direct_tail(const SpaceParams& p, int N, int upto) {
  double s = 0.0;
  for (int n = upto; n > N; --n) s += block_dim(p.d, n) * std::pow(eigenvalue(p, n), -p.rho());
  return s;
}

double ks_normal(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double M = static_cast<double>(x.size());
  double D = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = 0.5 * std::erfc(-x[i] / std::sqrt(2.0));
    D = std::max({D, (i + 1) / M - F, F - i / M});
  }
  return D;
}

}  // namespace

TEST(Gaussian, SpectralTailMatchesDirectSum) {
  for (const SpaceParams p : {SpaceParams{1, 0.5, 2.0, 2.0}, SpaceParams{2, 1.0, 2.0, 4.0},
                              SpaceParams{1, 2.0, 1.0, 2.0}}) {
    for (int N : {4, 16, 64}) {
      const double ref = direct_tail(p, N, 400000);
      // direct sum to 4N plus an integral bound: an upper bound, tight to a few percent
      EXPECT_GE(spectral_tail(p, N), ref * (1 - 1e-12)) << p.d << " " << N;
      EXPECT_LE(spectral_tail(p, N) / ref, 1.05) << p.d << " " << N;
    }
    EXPECT_NEAR(spectral_total(p) / direct_tail(p, 0, 400000), 1.0, 1e-6);
  }
}

TEST(Gaussian, TruncationDegree) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const int N = truncation_degree(p, 1e-4);
  EXPECT_LE(spectral_tail(p, N), 1e-4 * spectral_total(p));
  EXPECT_GT(spectral_tail(p, N - 1), 1e-4 * spectral_total(p));
  const GaussianSampler s(p);
  EXPECT_EQ(s.max_degree(), N);
  EXPECT_LE(s.tail_ratio(), 1e-4);
}

TEST(Gaussian, CoefficientLaw) {
  const SpaceParams p{2, 0.5, 2.0, 4.0};
  const GaussianSampler s(p, 12);
  const int M = 2000;
  Eigen::MatrixXd draws(M, CoeffVector(p, 12).size());
  for (int i = 0; i < M; ++i) {
    auto eng = draw_engine(99, i);
    draws.row(i) = s.sample(eng).data().transpose();
  }
  const CoeffVector layout(p, 12);
  EXPECT_EQ(draws.col(0).cwiseAbs().maxCoeff(), 0.0);
  for (int n = 1; n <= 12; ++n)
    for (std::int64_t k = 0; k < layout.block_size(n); ++k) {
      const auto col = draws.col(layout.offset(n) + k);
      const double var = eigenvalue(p, n) > 0 ? std::pow(eigenvalue(p, n), -p.rho()) : 0.0;
      const double mean = col.mean();
      const double v = (col.array() - mean).square().sum() / (M - 1);
      EXPECT_LE(std::abs(mean), 4 * std::sqrt(var / M));
      EXPECT_LE(std::abs(v - var), 4 * var * std::sqrt(2.0 / (M - 1)));
      EXPECT_DOUBLE_EQ(s.variance(n), var);
    }
}

TEST(Gaussian, WeightedCoefficientsAreStandardNormal) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const GaussianSampler s(p, 40);
  const int M = 2000;
  std::vector<std::vector<double>> z(5, std::vector<double>(M));
  const int ns[5] = {1, 3, 7, 20, 40};
  for (int i = 0; i < M; ++i) {
    auto eng = draw_engine(5, i);
    const auto c = s.sample(eng);
    for (int t = 0; t < 5; ++t)
      z[t][i] = std::pow(eigenvalue(p, ns[t]), 0.5 * p.rho()) * c.at({ns[t], 1});
  }
  for (int t = 0; t < 5; ++t) EXPECT_LT(ks_normal(z[t]), 1.36 / std::sqrt(M)) << ns[t];
}

TEST(Gaussian, Deterministic) {
  const GaussianSampler s({2, 1.0, 2.0, 4.0}, 10);
  auto a = draw_engine(7, 3), b = draw_engine(7, 3), c = draw_engine(7, 4);
  EXPECT_EQ(s.sample(a).data(), s.sample(b).data());
  auto a2 = draw_engine(7, 3);
  EXPECT_NE(s.sample(a2).data(), s.sample(c).data());
}
