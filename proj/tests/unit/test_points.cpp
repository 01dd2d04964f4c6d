#include "ballwidth/errors.hpp"
#include "ballwidth/points.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ballwidth;

namespace {

// great-circle distance via atan2(|u x v|, u.v) on the lifted points
double lifted_distance(const Point& x, const Point& y) {
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd u(d + 1), v(d + 1);
  u << x, std::sqrt(std::max(0.0, 1 - x.squaredNorm()));
  v << y, std::sqrt(std::max(0.0, 1 - y.squaredNorm()));
  const double c = u.dot(v);
  const double s = std::sqrt(std::max(0.0, u.squaredNorm() * v.squaredNorm() - c * c));
  return std::atan2(s, c);
}

double brute_separation(const Eigen::MatrixXd& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j)
      best = std::min(best, lifted_distance(pts.col(i), pts.col(j)));
  return best;
}

}  // namespace

TEST(Points, RhoTildeExamples) {
  const Point x = (Point(2) << 0.2, -0.5).finished();
  EXPECT_NEAR(rho_tilde(x, x), 0.0, 1e-7);
  const Point e = (Point(2) << 1.0, 0.0).finished();
  EXPECT_NEAR(rho_tilde(e, Point(-e)), std::numbers::pi, 1e-12);
}

TEST(Points, RhoTildeMatchesSphereLift) {
  std::mt19937_64 eng(1);
  for (int d = 1; d <= 3; ++d)
    for (int t = 0; t < 100; ++t) {
      const auto x = oracle::random_ball_point(d, eng), y = oracle::random_ball_point(d, eng);
      EXPECT_NEAR(rho_tilde(x, y), lifted_distance(x, y), 1e-12);
      EXPECT_EQ(rho_tilde(x, y), rho_tilde(y, x));
    }
}

TEST(Points, RhoTildeTriangleInequality) {
  std::mt19937_64 eng(2);
  for (int t = 0; t < 300; ++t) {
    const auto x = oracle::random_ball_point(2, eng), y = oracle::random_ball_point(2, eng),
               z = oracle::random_ball_point(2, eng);
    EXPECT_LE(rho_tilde(x, z), rho_tilde(x, y) + rho_tilde(y, z) + 1e-12);
  }
}

TEST(Points, LiftProjectRoundTrip) {
  std::mt19937_64 eng(3);
  Eigen::MatrixXd pts(2, 20);
  for (int i = 0; i < 20; ++i) pts.col(i) = oracle::random_ball_point(2, eng);
  const auto L = lift(pts);
  EXPECT_EQ(L.rows(), 3);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(L.col(i).norm(), 1.0, 1e-14);
  EXPECT_LE((project(L) - pts).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Points, OneDimensionalQuarterPi) {
  // greedy insertion from the pole stops at {0, pi/2, pi} on the lifted semicircle,
  // whose covering radius is pi/4 up to pool resolution
  const auto s = build_separated(1, std::numbers::pi / 4, 5);
  EXPECT_GE(s.size(), 3);
  EXPECT_LE(s.size(), 16);
  EXPECT_GE(brute_separation(s.points), std::numbers::pi / 4);
  // covering against 10^4 equally spaced lifted angles
  double cov = 0.0;
  for (int a = 0; a <= 10000; ++a) {
    const Point x = Point::Constant(1, std::cos(std::numbers::pi * a / 10000.0));
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < s.size(); ++i) best = std::min(best, lifted_distance(x, s.points.col(i)));
    cov = std::max(cov, best);
  }
  EXPECT_LE(cov, std::numbers::pi / 4 + 1e-12);
}

TEST(Points, SeparationAndCoveringInvariants) {
  for (int d = 1; d <= 3; ++d)
    for (double eps : {0.5, 0.25}) {
      const auto s = build_separated(d, eps, 11);
      EXPECT_GE(s.separation, eps);
      EXPECT_LE(s.covering, eps);
      EXPECT_NEAR(brute_separation(s.points), s.separation, 1e-12);
      EXPECT_NEAR(measure_separation(s.points), s.separation, 1e-12);
    }
}

TEST(Points, CardinalityScaling) {
  for (int d = 1; d <= 2; ++d) {
    std::vector<double> c;
    std::int64_t prev = 0;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
      const auto s = build_separated(d, eps, 3);
      if (prev > 0) {
        const double g = static_cast<double>(s.size()) / prev;
        EXPECT_GE(g, 2.0 * (d == 1 ? 0.9 : 1.0));
        EXPECT_LE(g, 8.0);
      }
      prev = s.size();
      c.push_back(s.size() * std::pow(eps, d));
    }
    const double lo = *std::min_element(c.begin(), c.end()), hi = *std::max_element(c.begin(), c.end());
    EXPECT_LE(hi / lo, 8.0);
  }
}

TEST(Points, Deterministic) {
  const auto a = build_separated(2, 0.15, 42), b = build_separated(2, 0.15, 42);
  EXPECT_EQ(a.points, b.points);
}

TEST(Points, InvalidEpsilon) {
  EXPECT_THROW(build_separated(2, 0.0, 1), DomainError);
  EXPECT_THROW(build_separated(2, 2.0, 1), DomainError);
}

TEST(Points, NearestPoints) {
  std::mt19937_64 eng(4);
  Eigen::MatrixXd pts(2, 50), q(2, 30);
  for (int i = 0; i < 50; ++i) pts.col(i) = oracle::random_ball_point(2, eng);
  for (int i = 0; i < 30; ++i) q.col(i) = oracle::random_ball_point(2, eng);
  Eigen::VectorXd dist;
  const auto who = nearest_points(pts, q, &dist);
  for (int i = 0; i < 30; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 50; ++j) best = std::min(best, lifted_distance(q.col(i), pts.col(j)));
    EXPECT_NEAR(dist(i), best, 1e-12);
    EXPECT_NEAR(lifted_distance(q.col(i), pts.col(who(i))), best, 1e-12);
  }
}
