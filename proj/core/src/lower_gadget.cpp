#include "ballwidth/lower_gadget.hpp"

#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/cubature.hpp"
#include "ballwidth/diagonal.hpp"
#include "ballwidth/errors.hpp"
#include "ballwidth/operators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace ballwidth {

namespace {

constexpr double kPi = std::numbers::pi;

double g_fn(double u) { return u > 0 ? std::exp(-1.0 / u) : 0.0; }

template <class F>
double gk(F&& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-13);
}

double weight_at(double mu, const double* x, int d) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  return std::pow(std::max(0.0, 1.0 - r2), mu - 0.5);
}

// int_{S^{d-1}} W(x0 + rho w) dw
double angular_weight(const SpaceParams& p, const double* x0, double rho) {
  const int d = p.d;
  if (d == 1) {
    const double a = x0[0] + rho, b = x0[0] - rho;
    return weight_at(p.mu, &a, 1) + weight_at(p.mu, &b, 1);
  }
  if (d == 2) {
    return gk(
        [&](double th) {
          const double x[2] = {x0[0] + rho * std::cos(th), x0[1] + rho * std::sin(th)};
          return weight_at(p.mu, x, 2);
        },
        0.0, 2.0 * kPi);
  }
  if (d == 3) {
    return gk(
        [&](double th) {
          const double st = std::sin(th), ct = std::cos(th);
          return st * gk(
                          [&](double ph) {
                            const double x[3] = {x0[0] + rho * st * std::cos(ph),
                                                 x0[1] + rho * st * std::sin(ph),
                                                 x0[2] + rho * ct};
                            return weight_at(p.mu, x, 3);
                          },
                          0.0, 2.0 * kPi);
        },
        0.0, kPi);
  }
  throw UnsupportedDimension("bump system: d must be 1, 2 or 3");
}

// int_{|x - x0| < 1/m} F(m|x - x0|) W(x) dx, split at the profile breakpoints
template <class F>
double radial_integral(const SpaceParams& p, int m, const double* x0, F&& f) {
  const double breaks[] = {0.0, 0.25, 0.5, 2.0 / 3.0, 1.0};
  double acc = 0.0;
  for (int s = 0; s + 1 < 5; ++s) {
    acc += gk(
        [&](double t) {
          const double rho = t / m;
          return f(t) * std::pow(rho, p.d - 1) * angular_weight(p, x0, rho) / m;
        },
        breaks[s], breaks[s + 1]);
  }
  return acc;
}

struct LocalRule {
  Eigen::MatrixXd x;
  std::vector<double> w;  // includes W_mu
};

// Composite Gauss-Legendre in t = m|x - x_j| (panels split at the profile breakpoints) times
// a periodic trapezoid / Gauss-Legendre angular rule; resolves degree-N polynomials on the
// support of bump j.
LocalRule bump_rule(const BumpSystem& sys, std::int64_t j, int N) {
  const SpaceParams& p = sys.params;
  const int d = p.d, m = sys.m;
  constexpr int G = 16;
  const auto gl = gauss_jacobi(0.0, 0.0, G);
  const double breaks[] = {0.0, 0.25, 0.5, 2.0 / 3.0, 1.0};
  // each panel spans at most about one half-wavelength of a degree-N polynomial
  const int sub = 2 + static_cast<int>(std::ceil(2.0 * N / (kPi * m)));
  std::vector<double> t, tw;
  for (int s = 0; s + 1 < 5; ++s) {
    const double h = (breaks[s + 1] - breaks[s]) / sub;
    for (int k = 0; k < sub; ++k)
      for (int g = 0; g < G; ++g) {
        t.push_back(breaks[s] + h * (k + 0.5 * (gl.nodes[g] + 1.0)));
        tw.push_back(0.5 * h * gl.weights[g]);
      }
  }
  std::vector<Eigen::VectorXd> dirs;
  std::vector<double> dw;
  if (d == 1) {
    dirs = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
    dw = {1.0, 1.0};
  } else {
    const int K = 16 + 2 * static_cast<int>(std::ceil(N / static_cast<double>(m)));
    if (d == 2) {
      for (int l = 0; l < K; ++l) {
        const double ph = 2.0 * kPi * l / K;
        dirs.push_back((Eigen::VectorXd(2) << std::cos(ph), std::sin(ph)).finished());
        dw.push_back(2.0 * kPi / K);
      }
    } else {
      const auto gz = gauss_jacobi(0.0, 0.0, K / 2 + 1);
      for (std::size_t a = 0; a < gz.size(); ++a) {
        const double z = gz.nodes[a], sz = std::sqrt(1.0 - z * z);
        for (int l = 0; l < K; ++l) {
          const double ph = 2.0 * kPi * l / K;
          dirs.push_back((Eigen::VectorXd(3) << sz * std::cos(ph), sz * std::sin(ph), z).finished());
          dw.push_back(gz.weights[a] * 2.0 * kPi / K);
        }
      }
    }
  }
  LocalRule out;
  out.x.resize(d, static_cast<Eigen::Index>(t.size() * dirs.size()));
  const Eigen::VectorXd c = sys.centers.col(j);
  Eigen::Index col = 0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    const double r = t[a] / m;
    for (std::size_t b = 0; b < dirs.size(); ++b) {
      out.x.col(col) = c + r * dirs[b];
      out.w.push_back(tw[a] / m * std::pow(r, d - 1) * dw[b] *
                      weight_at(p.mu, out.x.col(col).data(), d));
      ++col;
    }
  }
  return out;
}

}  // namespace

double bump_profile(double t, double a, double b) {
  if (t <= a) return 1.0;
  if (t >= b) return 0.0;
  const double u = g_fn(b - t), v = g_fn(t - a);
  return u / (u + v);
}

double bump1(double t) { return bump_profile(t, 2.0 / 3.0, 1.0); }
double bump2(double t) { return bump_profile(t, 0.25, 0.5); }

double BumpSystem::phi(std::int64_t j, const Point& x) const {
  const double t = m * (x - centers.col(j)).norm();
  if (t >= 1.0) return 0.0;
  return bump1(t) - c(j) * bump2(t);
}

double BumpSystem::eval(const Eigen::VectorXd& a, const Point& x) const {
  double v = 0.0;
  for (std::int64_t j = 0; j < size(); ++j)
    if (a(j) != 0.0) v += a(j) * phi(j, x);
  return v;
}

double BumpSystem::integral(std::int64_t j, double p, bool signed_value) const {
  const double cj = c(j);
  return radial_integral(params, m, centers.col(j).data(), [&](double t) {
    const double h = bump1(t) - cj * bump2(t);
    return signed_value ? h : std::pow(std::abs(h), p);
  });
}

double BumpSystem::phi_norm(std::int64_t j, double q) const {
  if (std::isinf(q)) return std::max(std::abs(1.0 - c(j)), 1.0);
  if (q == 2.0 && norm2.size() == size()) return norm2(j);
  return std::pow(integral(j, q), 1.0 / q);
}

double BumpSystem::lq_norm(const Eigen::VectorXd& a, double q) const {
  if (a.size() != size()) throw DomainError("BumpSystem::lq_norm: coefficient count mismatch");
  if (std::isinf(q)) {
    double v = 0.0;
    for (std::int64_t j = 0; j < size(); ++j) v = std::max(v, std::abs(a(j)) * phi_norm(j, q));
    return v;
  }
  double s = 0.0;
  for (std::int64_t j = 0; j < size(); ++j)
    if (a(j) != 0.0) s += std::pow(std::abs(a(j)) * phi_norm(j, q), q);
  return std::pow(s, 1.0 / q);
}

BumpSystem build_bump_system(const SpaceParams& params, int m, std::uint64_t /*seed*/) {
  if (params.d < 1 || params.d > 3) throw UnsupportedDimension("bump system: d must be 1, 2 or 3");
  if (m < 6) throw DomainError("build_bump_system: m must be >= 6");
  const int d = params.d;
  const double h = 4.0 / m;
  const int reach = static_cast<int>(std::floor((2.0 / 3.0) / h + 1e-12));
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> idx(d, -reach);
  while (true) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = h * idx[i];
    if (x.norm() <= 2.0 / 3.0 + 1e-12) pts.push_back(x);
    int k = 0;
    while (k < d && ++idx[k] > reach) idx[k++] = -reach;
    if (k == d) break;
  }
  if (pts.size() < 2) {
    std::ostringstream msg;
    msg << "build_bump_system: m=" << m << " yields fewer than 2 centers";
    throw DomainError(msg.str());
  }
  BumpSystem sys;
  sys.params = params;
  sys.m = m;
  sys.centers.resize(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) sys.centers.col(i) = pts[i];
  sys.c.resize(sys.size());
  for (std::int64_t j = 0; j < sys.size(); ++j) {
    const double* x0 = sys.centers.col(j).data();
    const double i1 = radial_integral(params, m, x0, [](double t) { return bump1(t); });
    const double i2 = radial_integral(params, m, x0, [](double t) { return bump2(t); });
    sys.c(j) = i1 / i2;
  }
  sys.norm2.resize(sys.size());
  for (std::int64_t j = 0; j < sys.size(); ++j) sys.norm2(j) = std::sqrt(sys.integral(j, 2.0));
  return sys;
}

std::pair<double, double> bump_norm_equivalence(const BumpSystem& sys, double q, int trials,
                                                std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  const int d = sys.params.d;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::vector<double> norms(sys.size());
  for (std::int64_t j = 0; j < sys.size(); ++j) norms[j] = sys.phi_norm(j, q);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd a(sys.size());
    for (auto& v : a) v = normal(eng);
    double num, den;
    if (std::isinf(q)) {
      num = 0.0;
      for (std::int64_t j = 0; j < sys.size(); ++j) num = std::max(num, std::abs(a(j)) * norms[j]);
      den = a.cwiseAbs().maxCoeff();
    } else {
      double s = 0.0;
      for (std::int64_t j = 0; j < sys.size(); ++j) s += std::pow(std::abs(a(j)) * norms[j], q);
      num = std::pow(s, 1.0 / q);
      den = std::pow(static_cast<double>(sys.m), -d / q) *
            std::pow(a.array().abs().pow(q).sum(), 1.0 / q);
    }
    lo = std::min(lo, num / den);
    hi = std::max(hi, num / den);
  }
  return {lo, hi};
}

BernsteinResult bernstein_check(const BumpSystem& sys, double rho, int trials, int degree_cap,
                                std::uint64_t seed, double tail_budget) {
  const SpaceParams& p = sys.params;
  const BallBasis basis(p, degree_cap);
  // per-bump basis projections, reused across trials by linearity
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(basis.size(), sys.size());
  Eigen::VectorXd buf(basis.size());
  for (std::int64_t j = 0; j < sys.size(); ++j) {
    const LocalRule rule = bump_rule(sys, j, degree_cap);
    for (std::size_t i = 0; i < rule.w.size(); ++i) {
      const Point x = rule.x.col(static_cast<Eigen::Index>(i));
      const double v = sys.phi(j, x);
      if (v == 0.0) continue;
      basis.eval_all(x.data(), degree_cap, buf.data());
      proj.col(j).noalias() += (rule.w[i] * v) * buf;
    }
  }
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  BernsteinResult out;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd a(sys.size());
    for (auto& v : a) v = normal(eng);
    const CoeffVector c(p, degree_cap, proj * a);
    const double full = sys.lq_norm(a, 2.0);
    const double kept = c.norm();
    const double tail = std::sqrt(std::max(0.0, 1.0 - (kept * kept) / (full * full)));
    out.worst_tail = std::max(out.worst_tail, tail);
    if (tail > tail_budget) {
      std::ostringstream msg;
      msg << "bernstein_check: expansion tail " << tail << " exceeds budget " << tail_budget
          << " at degree " << degree_cap << " (m=" << sys.m << ")";
      throw ConvergenceError(msg.str());
    }
    const double deriv = frac_derivative(c, rho).norm();
    out.worst_ratio = std::max(out.worst_ratio, deriv / (std::pow(sys.m, rho) * full));
  }
  return out;
}

LowerDiagnostic lower_bound_diagnostic(const SpaceParams& params, int n, double q, double delta,
                                       std::int64_t M, std::uint64_t seed, int threads) {
  if (n < 1) throw DomainError("lower_bound_diagnostic: n must be >= 1");
  LowerDiagnostic out;
  out.N = 2 * n;
  out.identity = identity_width_empirical(out.N, n, q, delta, M, seed, threads);
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  const double pre = std::pow(static_cast<double>(n), -params.rho() / params.d + 0.5 - iq);
  out.value = pre * out.identity.value;
  out.stderr_ = pre * out.identity.stderr_;
  return out;
}

}  // namespace ballwidth
