#include "ballwidth/errors.hpp"
#include "ballwidth/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ballwidth;

namespace {

// explicit power series of C_n^lambda in long double
long double gegenbauer_series(long double lambda, int n, long double t) {
  long double acc = 0.0L;
  for (int k = 0; 2 * k <= n; ++k) {
    const long double lg = std::lgamma(n - k + lambda) - std::lgamma(lambda) -
                           std::lgamma(k + 1.0L) - std::lgamma(n - 2 * k + 1.0L);
    const long double term = std::exp(lg) * std::pow(2.0L * t, n - 2 * k);
    acc += (k % 2 ? -term : term);
  }
  return acc;
}

long double gen_binom(long double a, int k) {
  long double v = 1.0L;
  for (int i = 0; i < k; ++i) v *= (a - i) / (i + 1);
  return v;
}

// P_n^{(a,b)}(t) = sum_s binom(n+a, n-s) binom(n+b, s) ((t-1)/2)^s ((t+1)/2)^(n-s)
long double jacobi_explicit(long double a, long double b, int n, long double t) {
  long double acc = 0.0L;
  for (int s = 0; s <= n; ++s)
    acc += gen_binom(n + a, n - s) * gen_binom(n + b, s) * std::pow((t - 1) / 2, s) *
           std::pow((t + 1) / 2, n - s);
  return acc;
}

std::int64_t binom(int n, int k) {
  std::int64_t v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace

TEST(Spectral, EigenvalueExamples) {
  EXPECT_EQ(eigenvalue({1, 0.0, 1.0, 2.0}, 0), 0.0);
  EXPECT_EQ(eigenvalue({1, 0.0, 1.0, 2.0}, 3), 9.0);
  EXPECT_EQ(eigenvalue({3, 0.5, 1.0, 4.0}, 2), 10.0);
}

TEST(Spectral, EigenvalueGrowth) {
  for (int d = 1; d <= 4; ++d)
    for (double mu : {0.0, 0.5, 1.0, 2.5}) {
      const SpaceParams p{d, mu, 1.0, 5.0};
      for (int n = 1; n <= 300; ++n) {
        EXPECT_LE(std::abs(eigenvalue(p, n) / (double(n) * n) - 1.0), (2 * mu + d - 1) / n + 1e-15);
        EXPECT_GT(eigenvalue(p, n + 1), eigenvalue(p, n));
      }
    }
}

TEST(Spectral, BlockDimExamples) {
  for (int n = 0; n < 20; ++n) EXPECT_EQ(block_dim(1, n), 1);
  EXPECT_EQ(block_dim(2, 3), 4);
  EXPECT_EQ(block_dim(3, 2), 6);
}

TEST(Spectral, BlockDimsSumToPolyDim) {
  for (int d = 1; d <= 4; ++d) {
    std::int64_t acc = 0;
    for (int n = 0; n <= 200; ++n) {
      acc += block_dim(d, n);
      EXPECT_EQ(acc, binom(n + d, d));
      EXPECT_EQ(poly_dim(d, n), acc);
    }
  }
}

TEST(Spectral, WeightNormConstExamples) {
  EXPECT_NEAR(weight_norm_const(1, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(weight_norm_const(2, 0.5), 1.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(weight_norm_const(1, 1.0), 2.0 / std::numbers::pi, 1e-15);
  EXPECT_THROW(weight_norm_const(1, -0.1), DomainError);
}

TEST(Spectral, WeightNormConstClosedMatchesNumeric) {
  for (int d = 1; d <= 4; ++d)
    for (double g : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
      const double a = weight_norm_const(d, g), b = weight_norm_const_numeric(d, g);
      EXPECT_NEAR(a / b, 1.0, 1e-12) << "d=" << d << " gamma=" << g;
    }
}

TEST(Spectral, GegenbauerExamples) {
  for (double t : {-1.0, -0.2, 0.4, 1.0}) EXPECT_EQ(gegenbauer(0.7, 0, t), 1.0);
  EXPECT_NEAR(gegenbauer(1.0, 1, 0.3), 0.6, 1e-15);
  EXPECT_NEAR(gegenbauer(1.0, 2, 0.5), 0.0, 1e-15);
}

TEST(Spectral, GegenbauerMatchesSeries) {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> lam(0.05, 4.0), tt(-1.0, 1.0);
  std::uniform_int_distribution<int> nn(0, 50);
  for (int i = 0; i < 100; ++i) {
    const double l = lam(eng), t = tt(eng);
    const int n = nn(eng);
    const long double ref = gegenbauer_series(l, n, t);
    const double v = gegenbauer(l, n, t);
    // the alternating series loses digits; compare against its own scale
    long double scale = 0.0L;
    for (int k = 0; 2 * k <= n; ++k)
      scale += std::exp(std::lgamma(n - k + (long double)l) - std::lgamma((long double)l) -
                        std::lgamma(k + 1.0L) - std::lgamma(n - 2 * k + 1.0L)) *
               std::pow(2.0L * std::abs(t), n - 2 * k);
    const double tol = 1e-10 * std::max<double>(std::abs((double)ref), 1e-6 * (double)scale);
    EXPECT_NEAR(v, (double)ref, tol) << "lambda=" << l << " n=" << n << " t=" << t;
  }
}

TEST(Spectral, GegenbauerNormalizedZeroLimit) {
  for (int n = 1; n <= 10; ++n)
    for (double t : {-0.9, 0.1, 0.77})
      EXPECT_NEAR(gegenbauer_normalized(0.0, n, t), 2.0 * std::cos(n * std::acos(t)), 1e-12);
}

TEST(Spectral, JacobiExamples) {
  EXPECT_EQ(jacobi(0.3, 1.2, 0, 0.5), 1.0);
  EXPECT_NEAR(jacobi(0.0, 0.0, 1, 0.7), 0.7, 1e-15);
  EXPECT_NEAR(jacobi(1.0, 0.0, 1, 0.0), 0.5, 1e-15);
}

TEST(Spectral, JacobiMatchesExplicitSum) {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> ab(-0.9, 3.0), tt(-1.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const double a = ab(eng), b = ab(eng), t = tt(eng);
    for (int n : {2, 5, 9, 14}) {
      const long double ref = jacobi_explicit(a, b, n, t);
      EXPECT_NEAR(jacobi(a, b, n, t), (double)ref, 1e-10 * std::max(1.0, std::abs((double)ref)));
    }
  }
}

TEST(Spectral, GaussJacobiExamples) {
  auto r1 = gauss_jacobi(0, 0, 1);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_NEAR(r1.nodes[0], 0.0, 1e-15);
  EXPECT_NEAR(r1.weights[0], 2.0, 1e-14);
  auto r2 = gauss_jacobi(0, 0, 2);
  EXPECT_NEAR(std::abs(r2.nodes[0]), 1.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(std::abs(r2.nodes[1]), 1.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(r2.weights[0], 1.0, 1e-14);
  EXPECT_NEAR(r2.weights[1], 1.0, 1e-14);
  auto r3 = gauss_jacobi(0, 0, 3);  // alpha = beta = mu - 1, mu = 1
  double acc = 0.0;
  for (std::size_t i = 0; i < r3.size(); ++i) acc += r3.weights[i] * r3.nodes[i] * r3.nodes[i];
  EXPECT_NEAR(acc, 2.0 / 3.0, 1e-14);
}

TEST(Spectral, GaussJacobiAnalyticMoments) {
  // int ((1+t)/2)^k (1-t)^a (1+t)^b dt = 2^(a+b+1) B(a+1, b+k+1)
  for (double a : {-0.5, 0.0, 0.5, 1.5, 3.0})
    for (double b : {-0.5, 0.0, 1.0, 2.5})
      for (int N : {1, 4, 17, 40}) {
        const auto rule = gauss_jacobi(a, b, N);
        EXPECT_EQ(rule.exact_degree, 2 * N - 1);
        for (int k = 0; k <= 2 * N - 1; ++k) {
          double q = 0.0;
          for (std::size_t i = 0; i < rule.size(); ++i)
            q += rule.weights[i] * std::pow((1 + rule.nodes[i]) / 2, k);
          const double ref = std::exp((a + b + 1) * std::log(2.0) + std::lgamma(a + 1) +
                                      std::lgamma(b + k + 1) - std::lgamma(a + b + k + 2));
          EXPECT_NEAR(q / ref, 1.0, 1e-12) << a << " " << b << " " << N << " " << k;
        }
      }
}

TEST(Spectral, ParamsValidation) {
  EXPECT_THROW((SpaceParams{0, 0.5, 1.0, 2.0}.validate()), DomainError);
  EXPECT_THROW((SpaceParams{1, -0.5, 1.0, 2.0}.validate()), DomainError);
  EXPECT_NO_THROW((SpaceParams{1, 0.5, 2.0, 2.0}.validate()));
  EXPECT_TRUE((SpaceParams{1, 0.5, 2.0, 2.0}.admissible_for(2.0)));
}
