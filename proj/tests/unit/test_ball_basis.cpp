#include "ballwidth/ball_basis.hpp"
#include "ballwidth/errors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ballwidth;

TEST(BallBasis, ConstantFunction) {
  std::mt19937_64 eng(1);
  for (int d = 1; d <= 3; ++d)
    for (double mu : {0.0, 0.5, 1.0, 2.0}) {
      const BallBasis B({d, mu, 2.0, 4.0}, 3);
      for (int t = 0; t < 5; ++t) {
        const auto x = oracle::random_ball_point(d, eng);
        EXPECT_NEAR(B.eval({0, 1}, x), std::sqrt(weight_norm_const(d, mu)), 1e-14);
      }
    }
}

TEST(BallBasis, LegendreDegreeOne) {
  const BallBasis B({1, 0.5, 2.0, 2.0}, 2);
  EXPECT_NEAR(B.eval({1, 1}, Point::Constant(1, 0.5)), std::sqrt(1.5) * 0.5, 1e-14);
}

TEST(BallBasis, MatchesGramSchmidtOracle) {
  // Gram-Schmidt on 1, x, y, x^2, xy, y^2: the last three span V_2.
  const SpaceParams p{2, 1.0, 2.0, 4.0};
  const BallBasis B(p, 2);
  const auto rule = oracle::ball_rule(2, 1.0, 24);
  const Eigen::Index P = rule.w.size();
  Eigen::MatrixXd mono(P, 6);
  for (Eigen::Index i = 0; i < P; ++i) {
    const double x = rule.pts(0, i), y = rule.pts(1, i);
    mono.row(i) << 1, x, y, x * x, x * y, y * y;
  }
  Eigen::MatrixXd coef = Eigen::MatrixXd::Identity(6, 6);  // g_m = mono * coef.col(m)
  auto ip = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a.array() * b.array() * rule.w.array()).sum();
  };
  for (int m = 0; m < 6; ++m) {
    for (int l = 0; l < m; ++l) {
      const double c = ip(mono * coef.col(m), mono * coef.col(l));
      coef.col(m) -= c * coef.col(l);
    }
    coef.col(m) /= std::sqrt(ip(mono * coef.col(m), mono * coef.col(m)));
  }
  std::mt19937_64 eng(3);
  for (int k = 1; k <= 3; ++k) {
    Eigen::VectorXd phi(P);
    for (Eigen::Index i = 0; i < P; ++i) phi(i) = B.eval({2, k}, rule.pts.col(i));
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(6);
    for (int m = 3; m < 6; ++m) proj += ip(phi, mono * coef.col(m)) * coef.col(m);
    for (int t = 0; t < 10; ++t) {
      const auto x = oracle::random_ball_point(2, eng);
      Eigen::VectorXd mv(6);
      mv << 1, x(0), x(1), x(0) * x(0), x(0) * x(1), x(1) * x(1);
      EXPECT_NEAR(B.eval({2, k}, x), mv.dot(proj), 1e-10);
    }
  }
}

TEST(BallBasis, Orthonormality) {
  for (int d = 1; d <= 3; ++d)
    for (double mu : {0.0, 0.5, 1.0, 2.0}) {
      const int N = d == 3 ? 10 : 16;
      const BallBasis B({d, mu, 2.0, 4.0}, N);
      const auto rule = oracle::ball_rule(d, mu, 2 * N + 12);
      const Eigen::MatrixXd Phi = B.eval_matrix(rule.pts, N);
      const Eigen::MatrixXd G = Phi.transpose() * rule.w.asDiagonal() * Phi;
      const double err = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
      EXPECT_LE(err, 1e-9) << "d=" << d << " mu=" << mu;
    }
}

TEST(BallBasis, Orthonormality3dFullRange) {
  const BallBasis B({3, 1.0, 2.0, 4.0}, 16);
  const auto rule = oracle::ball_rule(3, 1.0, 40);
  const Eigen::MatrixXd Phi = B.eval_matrix(rule.pts, 16);
  const Eigen::MatrixXd G = Phi.transpose() * rule.w.asDiagonal() * Phi;
  EXPECT_LE((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BallBasis, EnumerationRoundTrip) {
  const BallBasis B({3, 0.5, 2.0, 4.0}, 7);
  EXPECT_EQ(B.size(), poly_dim(3, 7));
  for (std::int64_t f = 0; f < B.size(); ++f) {
    const auto idx = B.index(f);
    EXPECT_GE(idx.k, 1);
    EXPECT_LE(idx.k, block_dim(3, idx.n));
    EXPECT_EQ(B.flat(idx), f);
  }
}

TEST(BallBasis, EvalAllMatchesEval) {
  const BallBasis B({2, 1.0, 2.0, 4.0}, 9);
  std::mt19937_64 eng(9);
  const auto x = oracle::random_ball_point(2, eng);
  const auto all = B.eval_all(x, 9);
  for (std::int64_t f = 0; f < B.size(); ++f) EXPECT_DOUBLE_EQ(all(f), B.eval(B.index(f), x));
}

TEST(BallBasis, UnsupportedDimension) {
  EXPECT_THROW(BallBasis({4, 0.5, 2.0, 5.0}, 2), UnsupportedDimension);
}

TEST(BallBasis, PerturbationBreaksOrthonormality) {
  BasisOptions opt;
  opt.norm_perturbation = 1e-3;
  const BallBasis B({2, 1.0, 2.0, 4.0}, 4, opt);
  const auto rule = oracle::ball_rule(2, 1.0, 20);
  const Eigen::MatrixXd Phi = B.eval_matrix(rule.pts, 4);
  const Eigen::MatrixXd G = Phi.transpose() * rule.w.asDiagonal() * Phi;
  EXPECT_GT((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff(), 1e-4);
}
