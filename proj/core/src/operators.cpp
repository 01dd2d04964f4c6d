#include "ballwidth/operators.hpp"

#include "ballwidth/errors.hpp"

#include <cmath>
#include <sstream>

namespace ballwidth {

CoeffVector analyze_values(const Eigen::VectorXd& values, const SpaceParams& params, int N,
                           const CubatureRule& rule) {
  if (rule.exact_degree < 2 * N) {
    std::ostringstream msg;
    msg << "analyze: rule exact to degree " << rule.exact_degree << " but degree " << 2 * N
        << " is required for N=" << N;
    throw QuadratureDegreeError(msg.str());
  }
  if (values.size() != rule.size()) throw DomainError("analyze: value count != rule size");
  const BallBasis basis(params, N);
  CoeffVector out(params, N);
  Eigen::VectorXd buf(basis.size());
  const auto& pts = rule.points();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    basis.eval_all(pts.col(i).data(), N, buf.data());
    out.data() += (rule.weights(i) * values(i)) * buf;
  }
  return out;
}

CoeffVector analyze(const PointFunction& f, const SpaceParams& params, int N,
                    const CubatureRule& rule) {
  Eigen::VectorXd v(rule.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(rule.points().col(i));
  return analyze_values(v, params, N, rule);
}

double synth(const CoeffVector& c, const Point& x) {
  const BallBasis basis(c.params(), c.max_degree());
  return basis.eval_all(x, c.max_degree()).dot(c.data());
}

Eigen::VectorXd synth(const CoeffVector& c, const Eigen::MatrixXd& pts) {
  const BallBasis basis(c.params(), c.max_degree());
  Eigen::VectorXd out(pts.cols()), buf(basis.size());
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    basis.eval_all(pts.col(i).data(), c.max_degree(), buf.data());
    out(i) = buf.dot(c.data());
  }
  return out;
}

CoeffVector partial_sum(const CoeffVector& c, int n) {
  CoeffVector out = c;
  for (int j = std::max(n + 1, 0); j <= c.max_degree(); ++j) out.block(j).setZero();
  return out;
}

CoeffVector frac_derivative(const CoeffVector& c, double t) {
  CoeffVector out = c;
  if (t < 0 && (c.block(0).array() != 0.0).any())
    throw DomainError("frac_derivative: negative order needs a mean-zero vector (lambda_0 = 0)");
  out.block(0).setZero();
  for (int n = 1; n <= c.max_degree(); ++n)
    out.block(n) *= std::pow(eigenvalue(c.params(), n), 0.5 * t);
  return out;
}

double sobolev_norm(const CoeffVector& c, double r) {
  if ((c.block(0).array() != 0.0).any())
    throw DomainError("sobolev_norm: coefficient vector has a nonzero constant block");
  double acc = 0.0;
  for (int n = 1; n <= c.max_degree(); ++n)
    acc += std::pow(eigenvalue(c.params(), n), r) * c.block(n).squaredNorm();
  return std::sqrt(acc);
}

namespace {
double bump_g(double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double eta(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = bump_g(2.0 - t), b = bump_g(t - 1.0);
  return a / (a + b);
}

CoeffVector smoothed_operator(const CoeffVector& c, int n) {
  if (n < 1) throw DomainError("smoothed_operator: n must be >= 1");
  CoeffVector out = c.resized(std::min(c.max_degree(), 2 * n - 1));
  for (int j = 0; j <= out.max_degree(); ++j) out.block(j) *= eta(static_cast<double>(j) / n);
  return out;
}

std::pair<int, int> dyadic_range(int k) {
  if (k < 1) throw DomainError("dyadic block index must be >= 1");
  if (k == 1) return {0, 2};
  return {(1 << (k - 1)) + 1, 1 << k};
}

int dyadic_cover(int N) {
  int k = 1;
  while ((1 << k) < N) ++k;
  return k;
}

CoeffVector dyadic_block(const CoeffVector& c, int k) {
  const auto [lo, hi] = dyadic_range(k);
  CoeffVector out(c.params(), c.max_degree());
  for (int j = lo; j <= std::min(hi, c.max_degree()); ++j) out.block(j) = c.block(j);
  return out;
}

}  // namespace ballwidth
