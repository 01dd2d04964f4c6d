#include "ballwidth/cubature.hpp"
#include "ballwidth/errors.hpp"
#include "ballwidth/lq_norm.hpp"
#include "ballwidth/near_optimal.hpp"
#include "ballwidth/operators.hpp"

#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ballwidth;

namespace {

double adaptive(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-14);
}

// int_{B^d} f W_mu, d <= 2, nested adaptive Gauss-Kronrod in angle coordinates
double adaptive_ball(int d, double mu, const std::function<double(const Point&)>& f) {
  const double pi = std::numbers::pi;
  if (d == 1)
    return adaptive(
        [&](double th) {
          return f(Point::Constant(1, std::sin(th))) * std::pow(std::cos(th), 2 * mu);
        },
        -pi / 2, pi / 2);
  return adaptive(
      [&](double th) {
        const double r = std::sin(th);
        const double ang = adaptive(
            [&](double ph) { return f((Point(2) << r * std::cos(ph), r * std::sin(ph)).finished()); },
            0, 2 * pi);
        return ang * r * std::pow(std::cos(th), 2 * mu);
      },
      0, pi / 2);
}

}  // namespace

TEST(Cubature, ReproducesGaussLegendre) {
  for (int N : {3, 6, 10}) {
    std::vector<double> x, w;
    oracle::legendre(N, -1, 1, x, w);
    SeparatedSet set;
    set.d = 1;
    set.points = Eigen::Map<Eigen::RowVectorXd>(x.data(), N);
    const auto rule = cubature_weights(set, {1, 0.5, 2.0, 2.0}, 2 * N - 1);
    for (int i = 0; i < N; ++i) EXPECT_NEAR(rule.weights(i), w[i], 1e-10);
  }
}

TEST(Cubature, MatchesAdaptiveIntegration) {
  std::mt19937_64 eng(1);
  std::normal_distribution<double> g;
  for (int d = 1; d <= 2; ++d)
    for (double mu : {0.5, 1.0}) {
      const SpaceParams p{d, mu, 2.0, 4.0};
      const auto rule = lemma_rule(p, 3);
      const int deg = rule.exact_degree;
      // random polynomial in monomials, independent of the orthonormal basis
      const int terms = 6;
      std::vector<std::pair<Eigen::VectorXi, double>> poly;
      std::uniform_int_distribution<int> e(0, deg / d);
      for (int t = 0; t < terms; ++t) {
        Eigen::VectorXi ex(d);
        int tot = 0;
        for (int i = 0; i < d; ++i) {
          ex(i) = std::min(e(eng), deg - tot);
          tot += ex(i);
        }
        poly.push_back({ex, g(eng)});
      }
      auto P = [&](const Point& x) {
        double v = 0.0;
        for (auto& [ex, c] : poly) {
          double m = c;
          for (int i = 0; i < d; ++i) m *= std::pow(x(i), ex(i));
          v += m;
        }
        return v;
      };
      double q = 0.0, scale = 0.0;
      for (Eigen::Index i = 0; i < rule.size(); ++i) {
        q += rule.weights(i) * P(rule.points().col(i));
        scale += rule.weights(i) * std::abs(P(rule.points().col(i)));
      }
      const double ref = adaptive_ball(d, mu, P);
      EXPECT_NEAR(q, ref, 1e-9 * std::max(std::abs(ref), scale)) << "d=" << d << " mu=" << mu;
    }
}

TEST(Cubature, OrthogonalityMomentsAndPositivity) {
  for (int d = 1; d <= 2; ++d)
    for (int n : {4, 8}) {
      const SpaceParams p{d, 0.5, 2.0, 4.0};
      const auto rule = lemma_rule(p, n);
      EXPECT_EQ(rule.exact_degree, 4 * n);
      EXPECT_LE(rule.residual, 1e-10);
      EXPECT_LE(moment_residual(rule, 4 * n), 1e-10);
      EXPECT_GT(rule.weights.minCoeff(), 0.0);
      EXPECT_LE(rule.profile_ratio(), 50.0);
      EXPECT_GE(rule.set.separation, rule.set.epsilon);
    }
}

TEST(Cubature, TooFewPoints) {
  const auto set = build_separated(2, 0.8, 1);
  try {
    cubature_weights(set, {2, 0.5, 2.0, 4.0}, 20);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("dim Pi_20^2 = 231"), std::string::npos) << e.what();
  }
}

TEST(Cubature, ProductRuleExactness) {
  for (int d = 1; d <= 3; ++d)
    for (double mu : {0.0, 0.5, 2.0}) {
      const int deg = d == 3 ? 10 : 20;
      const auto rule = product_rule({d, mu, 2.0, 4.0}, deg);
      EXPECT_LE(moment_residual(rule, deg), 1e-12) << d << " " << mu;
      EXPECT_GT(rule.weights.minCoeff(), 0.0);
    }
}

TEST(Cubature, MzRatioConstantAndQ2) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const auto rule = lemma_rule(p, 8);
  EXPECT_NEAR(rule.weights.sum() * weight_norm_const(1, 0.5), 1.0, 1e-10);
  const auto r2 = mz_ratio(rule, 8, 2.0, 200, 3);
  EXPECT_GE(r2.low, 0.5);
  EXPECT_LE(r2.high, 2.0);
  // exact for q = 2 since the rule integrates |f|^2
  EXPECT_NEAR(r2.low, 1.0, 1e-9);
  EXPECT_NEAR(r2.high, 1.0, 1e-9);
}

TEST(Cubature, MzRatioStableUnderDoubling) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  for (double q : {4.0, std::numeric_limits<double>::infinity()}) {
    const auto a = mz_ratio(lemma_rule(p, 4), 4, q, 50, 1);
    const auto b = mz_ratio(lemma_rule(p, 8), 8, q, 50, 1);
    EXPECT_GT(a.low, 0.0);
    EXPECT_TRUE(std::isfinite(a.high));
    EXPECT_LE(std::max(a.low / b.low, b.low / a.low), 2.0);
    EXPECT_LE(std::max(a.high / b.high, b.high / a.high), 2.0);
  }
}

TEST(Cubature, WeightSumSweep) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  std::vector<double> v;
  for (int n : {8, 16, 32}) v.push_back(weight_sum_check(lemma_rule(p, n), 0.5 * 0.999, n));
  EXPECT_LE(*std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end()), 10.0);
  const auto rule = lemma_rule({1, 1.0, 2.0, 2.0}, 8);
  const double f = weight_sum_check(rule, 0.25, 8);
  EXPECT_TRUE(std::isfinite(f));
  EXPECT_GT(f, 0.0);
  EXPECT_NEAR(weight_sum_check(rule, 0.0, 8), rule.size() / 8.0, 1e-12);
  EXPECT_THROW(weight_sum_check(rule, 0.5, 8), DomainError);
  EXPECT_THROW(weight_sum_check(rule, -0.1, 8), DomainError);
}

TEST(Cubature, MzBlockScalings) {
  const SpaceParams p{2, 0.5, 2.0, 4.0};
  const auto B4 = mz_block_data(p, 2, 4.0);
  for (Eigen::Index i = 0; i < B4.R.size(); ++i) EXPECT_EQ(B4.R(i), B4.V(i) * B4.S(i));
  const auto B2 = mz_block_scalings(B4.rule, 2, 2.0);
  for (Eigen::Index i = 0; i < B2.V.size(); ++i) EXPECT_EQ(B2.V(i), 1.0);
}

TEST(Cubature, MzReconstruction) {
  std::mt19937_64 eng(5);
  std::normal_distribution<double> g;
  for (int d = 1; d <= 2; ++d)
    for (int k = 1; k <= 3; ++k) {
      const SpaceParams p{d, 1.0, 2.0, 4.0};
      const auto B = mz_block_data(p, k, 2.0);
      CoeffVector f(p, 1 << k);
      for (auto& v : f.data()) v = g(eng);
      const auto rec = synthesize_block(B, p, sample_block(B, f));
      const auto diff = rec - f.resized(rec.max_degree());
      EXPECT_LE(diff.norm(), 1e-8 * f.norm()) << d << " " << k;
    }
}
