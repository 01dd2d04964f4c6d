#include "ballwidth/errors.hpp"
#include "ballwidth/gaussian.hpp"
#include "ballwidth/lq_norm.hpp"
#include "ballwidth/operators.hpp"
#include "ballwidth/widths.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ballwidth;

TEST(LqError, Examples) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  CoeffVector f(p, 6), g(p, 6);
  f.at({3, 1}) = 0.4;
  for (double q : {1.0, 2.0, 3.0, 4.0, std::numeric_limits<double>::infinity()})
    EXPECT_EQ(lq_error(f, f, q, p), 0.0);
  g = f;
  g.at({4, 1}) += 1.0;
  EXPECT_NEAR(lq_error(f, g, 2.0, p), 1.0, 1e-14);
  CoeffVector e(p, 1), z(p, 1);
  e.at({1, 1}) = 1.0;
  // phi_11 = sqrt(3/2) x
  const double ref = std::pow(
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [](double x) { return std::pow(std::sqrt(1.5) * x, 4); }, -1.0, 1.0, 10, 1e-14),
      0.25);
  EXPECT_NEAR(lq_error(e, z, 4.0, p), ref, 1e-6);
  EXPECT_NEAR(lq_error(e, z, std::numeric_limits<double>::infinity(), p), std::sqrt(1.5), 1e-12);
}

TEST(LqError, NonEvenQMatchesAdaptive) {
  const SpaceParams p{1, 1.0, 2.0, 2.0};
  CoeffVector e(p, 5), z(p, 5);
  std::mt19937_64 eng(3);
  std::normal_distribution<double> g;
  for (auto& v : e.data()) v = g(eng);
  const BallBasis B(p, 5);
  const double ref = std::pow(
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double x) {
            return std::pow(std::abs(B.eval_all(Point::Constant(1, x), 5).dot(e.data())), 3.0) *
                   std::sqrt(1 - x * x);
          },
          -1.0, 1.0, 15, 1e-13),
      1.0 / 3.0);
  EXPECT_NEAR(lq_error(e, z, 3.0, p) / ref, 1.0, 0.01);
}

TEST(Widths, PartialSumClosedForm) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const GaussianSampler s(p, 256);
  for (int n : {8, 16, 32}) {
    const PartialSumOperator S(p, n);
    const auto w = estimate_width(s, S, 2.0, WidthMode::Average, 2.0, 4000, 17);
    const double ref = std::sqrt(spectral_tail(p, n));
    EXPECT_LE(std::abs(w.value - ref), 3 * w.stderr_) << n << " " << w.value << " " << ref;
  }
}

TEST(Widths, FullRankOperatorErrorBelowTail) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const GaussianSampler s(p);
  const PartialSumOperator S(p, s.max_degree());
  const auto w = estimate_width(s, S, 2.0, WidthMode::Average, 2.0, 200, 1);
  EXPECT_LE(w.value, std::sqrt(s.tail_ratio() * spectral_total(p)) + 1e-15);
}

TEST(Widths, MonotoneInN) {
  const SpaceParams p{2, 0.5, 2.0, 4.0};
  const GaussianSampler s(p, 48);
  double prev = std::numeric_limits<double>::infinity(), prev_se = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const auto w = estimate_width(s, PartialSumOperator(p, n), 2.0, WidthMode::Probabilistic, 0.1,
                                  400, 5);
    EXPECT_LE(w.value, prev + 2 * std::max(prev_se, w.stderr_));
    prev = w.value;
    prev_se = w.stderr_;
  }
}

TEST(Widths, Preconditions) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const GaussianSampler s(p, 20);
  const PartialSumOperator S(p, 4);
  EXPECT_THROW(estimate_width(s, S, 2.0, WidthMode::Average, 2.0, 99, 1), DomainError);
  EXPECT_THROW(estimate_width(s, S, 2.0, WidthMode::Probabilistic, 0.01, 500, 1), DomainError);
  EXPECT_NO_THROW(estimate_width(s, S, 2.0, WidthMode::Probabilistic, 0.02, 500, 1));
}

TEST(Widths, StderrShrinksWithSamples) {
  std::mt19937_64 eng(1);
  std::gamma_distribution<double> gam(3.0, 1.0);
  std::vector<double> a(4000), b(8000);
  for (auto& v : a) v = gam(eng);
  for (auto& v : b) v = gam(eng);
  const double ra = power_mean_estimate(a, 2.0, 400, 1).second;
  const double rb = power_mean_estimate(b, 2.0, 400, 1).second;
  EXPECT_NEAR(ra / rb, std::sqrt(2.0), 0.3 * std::sqrt(2.0));
  const double qa = quantile_estimate(a, 0.1).second, qb = quantile_estimate(b, 0.1).second;
  EXPECT_NEAR(qa / qb, std::sqrt(2.0), 0.3 * std::sqrt(2.0));
}

TEST(Widths, QuantileOrderStatistic) {
  std::vector<double> e(100);
  for (int i = 0; i < 100; ++i) e[i] = 100 - i;
  EXPECT_EQ(quantile_estimate(e, 0.1).first, 90.0);
  EXPECT_EQ(quantile_estimate(e, 0.5).first, 50.0);
}

TEST(Widths, Deterministic) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const GaussianSampler s(p, 40);
  const PartialSumOperator S(p, 8);
  const auto a = estimate_width(s, S, 4.0, WidthMode::Average, 2.0, 200, 9);
  const auto b = estimate_width(s, S, 4.0, WidthMode::Average, 2.0, 200, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.stderr_, b.stderr_);
  WidthOptions two;
  two.threads = 2;
  EXPECT_EQ(estimate_width(s, S, 4.0, WidthMode::Average, 2.0, 200, 9, two).value, a.value);
}

TEST(RateFit, SyntheticTables) {
  std::vector<std::pair<double, double>> t1, t2;
  for (double n : {8.0, 16.0, 32.0, 64.0}) {
    t1.push_back({n, 3.0 * std::pow(n, -1.5)});
    t2.push_back({n, 0.5 / n * std::sqrt(std::log(std::exp(1.0) * n))});
  }
  EXPECT_NEAR(rate_fit(t1, RateModel::PurePower).exponent, -1.5, 1e-10);
  EXPECT_NEAR(rate_fit(t2, RateModel::PowerTimesSqrtLog).exponent, -1.0, 1e-10);
  EXPECT_NEAR(rate_fit(t2, RateModel::PowerTimesSqrtLog).residual, 0.0, 1e-12);
  EXPECT_GT(rate_fit(t2, RateModel::PurePower).residual, 1e-4);
}

TEST(RateFit, Errors) {
  std::vector<std::pair<double, double>> flat{{8, 1}, {8, 2}, {8, 3}, {8, 4}};
  EXPECT_THROW(rate_fit(flat, RateModel::PurePower), DomainError);
  std::vector<std::pair<double, double>> few{{8, 1}, {16, 0.5}, {32, 0.25}};
  EXPECT_THROW(rate_fit(few, RateModel::PurePower), DomainError);
  EXPECT_NO_THROW(rate_fit(few, RateModel::PurePower, 3));
}

TEST(Widths, ModeStrings) {
  for (auto m : {WidthMode::Probabilistic, WidthMode::Average, WidthMode::LowerDiagnostic})
    EXPECT_EQ(width_mode_from_string(to_string(m)), m);
  EXPECT_THROW(width_mode_from_string("bogus"), DomainError);
}
