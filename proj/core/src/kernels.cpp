#include "ballwidth/kernels.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/operators.hpp"

#include <cmath>
#include <sstream>

namespace ballwidth {

int KernelSpec::max_degree() const {
  if (representation == KernelRepresentation::BasisSum) return basis ? basis->max_degree() : -1;
  if (mu_zero_limit) return std::numeric_limits<int>::max();
  return u_rule.exact_degree;
}

KernelSpec make_kernel_spec(const SpaceParams& params, int max_degree, KernelRepresentation rep) {
  KernelSpec spec;
  spec.params = params;
  spec.representation = rep;
  if (rep == KernelRepresentation::BasisSum) {
    spec.basis = std::make_shared<BallBasis>(params, max_degree);
    return spec;
  }
  if (params.mu == 0.0) {
    spec.mu_zero_limit = true;
    return spec;
  }
  const int nu = (max_degree + 1) / 2 + 2;
  spec.u_rule = gauss_jacobi(params.mu - 1.0, params.mu - 1.0, nu);
  return spec;
}

double kernel_sum(const BallBasis& basis, int n, const Point& x, const Point& y) {
  const Eigen::VectorXd px = basis.eval_all(x, n);
  const Eigen::VectorXd py = basis.eval_all(y, n);
  const auto lo = basis.offset(n);
  const auto len = basis.size(n) - lo;
  return px.segment(lo, len).dot(py.segment(lo, len));
}

double kernel_sum(const SpaceParams& params, int n, const Point& x, const Point& y) {
  return kernel_sum(BallBasis(params, n), n, x, y);
}

namespace {

double compact_series(const KernelSpec& spec, const std::vector<double>& coeff, const Point& x,
                      const Point& y) {
  const int jmax = static_cast<int>(coeff.size()) - 1;
  if (jmax < 0) return 0.0;
  if (!spec.mu_zero_limit && jmax > spec.u_rule.exact_degree) {
    std::ostringstream msg;
    msg << "compact kernel: u-rule exact to degree " << spec.u_rule.exact_degree
        << " cannot integrate a degree-" << jmax << " Gegenbauer factor";
    throw QuadratureDegreeError(msg.str());
  }
  const SpaceParams& p = spec.params;
  const double lam = p.lambda();
  const double xy = x.dot(y);
  const double sx = std::sqrt(std::max(0.0, 1.0 - x.squaredNorm()));
  const double sy = std::sqrt(std::max(0.0, 1.0 - y.squaredNorm()));
  const double bd = weight_norm_const(p.d, p.mu);

  thread_local std::vector<double> g;
  g.resize(jmax + 1);
  auto integrand = [&](double u) {
    double t = xy + u * sx * sy;
    t = std::clamp(t, -1.0, 1.0);
    gegenbauer_normalized_all(lam, jmax, t, g.data());
    double acc = 0.0;
    for (int j = 0; j <= jmax; ++j) acc += coeff[j] * g[j];
    return acc;
  };
  if (spec.mu_zero_limit) return bd * 0.5 * (integrand(1.0) + integrand(-1.0));
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.u_rule.size(); ++i)
    acc += spec.u_rule.weights[i] * integrand(spec.u_rule.nodes[i]);
  return bd * u_weight_norm(p.mu) * acc;
}

double basis_series(const KernelSpec& spec, const std::vector<double>& coeff, const Point& x,
                    const Point& y) {
  const int jmax = static_cast<int>(coeff.size()) - 1;
  if (jmax < 0) return 0.0;
  const BallBasis& b = *spec.basis;
  if (jmax > b.max_degree()) throw DomainError("kernel_series: degree exceeds basis degree");
  const Eigen::VectorXd px = b.eval_all(x, jmax);
  const Eigen::VectorXd py = b.eval_all(y, jmax);
  double acc = 0.0;
  for (int j = 0; j <= jmax; ++j) {
    if (coeff[j] == 0.0) continue;
    const auto lo = b.offset(j), len = b.offset(j + 1) - lo;
    acc += coeff[j] * px.segment(lo, len).dot(py.segment(lo, len));
  }
  return acc;
}

}  // namespace

double kernel_series(const KernelSpec& spec, const std::vector<double>& coeff, const Point& x,
                     const Point& y) {
  if (spec.representation == KernelRepresentation::BasisSum)
    return basis_series(spec, coeff, x, y);
  return compact_series(spec, coeff, x, y);
}

double kernel_compact(const KernelSpec& spec, int n, const Point& x, const Point& y) {
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  return compact_series(spec, c, x, y);
}

std::vector<double> block_kernel_coeffs(const SpaceParams& params, int k, double deriv_order) {
  if (k < 1) throw DomainError("block_kernel: k must be >= 1");
  const int hi = 1 << k, lo = 1 << (k - 1);
  std::vector<double> c(hi + 1, 0.0);
  for (int j = lo + 1; j <= hi; ++j)
    c[j] = deriv_order == 0.0 ? 1.0 : std::pow(eigenvalue(params, j), 0.5 * deriv_order);
  return c;
}

double block_kernel(const KernelSpec& spec, int k, const Point& x, const Point& y,
                    double deriv_order) {
  return kernel_series(spec, block_kernel_coeffs(spec.params, k, deriv_order), x, y);
}

double block_kernel(const SpaceParams& params, int k, const Point& x, const Point& y,
                    double deriv_order) {
  return block_kernel(make_kernel_spec(params, 1 << k), k, x, y, deriv_order);
}

std::vector<double> smoothed_kernel_coeffs(int n) {
  if (n < 1) throw DomainError("smoothed kernel: n must be >= 1");
  std::vector<double> c(2 * n, 0.0);
  for (int j = 0; j < 2 * n; ++j) c[j] = eta(static_cast<double>(j) / n);
  return c;
}

double smoothed_kernel(const KernelSpec& spec, int n, const Point& x, const Point& y) {
  return kernel_series(spec, smoothed_kernel_coeffs(n), x, y);
}

}  // namespace ballwidth
