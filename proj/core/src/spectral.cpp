#include "ballwidth/spectral.hpp"

#include "ballwidth/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ballwidth {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_inf(double q) { return std::isinf(q) && q > 0; }

double pos_part(double v) { return v > 0 ? v : 0.0; }

}  // namespace

void SpaceParams::validate() const {
  std::ostringstream msg;
  if (d < 1) msg << "d must be >= 1 (got " << d << "); ";
  if (!(mu >= 0)) msg << "mu must be >= 0 (got " << mu << "); ";
  if (!(r > 0)) msg << "r must be > 0 (got " << r << "); ";
  if (!(s > d)) msg << "s must exceed d (got s=" << s << ", d=" << d << "); ";
  if (!msg.str().empty()) throw DomainError("invalid space parameters: " + msg.str());
}

bool SpaceParams::admissible_for(double q) const {
  const double h = is_inf(q) ? 0.5 : pos_part(0.5 - 1.0 / q);
  return r > (d + 2.0 * mu) * h && rho() > 0.5 * d + 2.0 * mu * d * h;
}

void SpaceParams::validate_for(double q) const {
  validate();
  if (!(q >= 1)) throw DomainError("integrability q must be >= 1");
  if (!admissible_for(q)) {
    std::ostringstream msg;
    msg << "parameters (d=" << d << ", mu=" << mu << ", r=" << r << ", s=" << s
        << ") violate the embedding/rate hypotheses for q=" << q;
    throw DomainError(msg.str());
  }
}

double eigenvalue(const SpaceParams& p, int n) {
  return static_cast<double>(n) * (n + 2.0 * p.mu + p.d - 1.0);
}

std::int64_t block_dim(int d, int n) {
  if (n < 0) return 0;
  // binom(n+d-1, n) = binom(n+d-1, d-1)
  std::int64_t v = 1;
  for (int i = 1; i <= d - 1; ++i) v = v * (n + i) / i;
  return v;
}

std::int64_t poly_dim(int d, int n) {
  if (n < 0) return 0;
  std::int64_t v = 1;
  for (int i = 1; i <= d; ++i) v = v * (n + i) / i;
  return v;
}

double weight_norm_const(int d, double gamma) {
  if (d < 1) throw DomainError("weight_norm_const: d must be >= 1");
  if (!(gamma >= 0)) throw DomainError("weight_norm_const: gamma must be >= 0");
  // int_{B^d} (1-|x|^2)^(gamma-1/2) = pi^(d/2) Gamma(gamma+1/2) / Gamma(gamma+1/2+d/2)
  const double logv = std::lgamma(gamma + 0.5 + 0.5 * d) - 0.5 * d * std::log(kPi) -
                      std::lgamma(gamma + 0.5);
  return std::exp(logv);
}

double weight_norm_const_numeric(int d, double gamma) {
  if (d < 1) throw DomainError("weight_norm_const_numeric: d must be >= 1");
  if (!(gamma >= 0)) throw DomainError("weight_norm_const_numeric: gamma must be >= 0");
  // radial form with r = sin(theta): int_0^{pi/2} sin^{d-1} cos^{2 gamma}
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double th) {
    return std::pow(std::sin(th), d - 1) * std::pow(std::cos(th), 2.0 * gamma);
  };
  const double radial = integrator.integrate(f, 0.0, kPi / 2, 1e-15);
  const double sphere = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
  return 1.0 / (sphere * radial);
}

double u_weight_norm(double mu) {
  if (!(mu > 0)) throw DomainError("u_weight_norm: mu must be > 0");
  return std::exp(std::lgamma(mu + 0.5) - 0.5 * std::log(kPi) - std::lgamma(mu));
}

double gegenbauer(double lambda, int n, double t) {
  if (n == 0) return 1.0;
  double c0 = 1.0, c1 = 2.0 * lambda * t;
  for (int k = 1; k < n; ++k) {
    const double c2 = (2.0 * (k + lambda) * t * c1 - (k + 2.0 * lambda - 1.0) * c0) / (k + 1.0);
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

void gegenbauer_normalized_all(double lambda, int n, double t, double* out) {
  out[0] = 1.0;
  if (n == 0) return;
  if (lambda < 1e-14) {
    double t0 = 1.0, t1 = t;
    out[1] = 2.0 * t;
    for (int k = 1; k < n; ++k) {
      const double t2 = 2.0 * t * t1 - t0;
      t0 = t1;
      t1 = t2;
      out[k + 1] = 2.0 * t2;
    }
    return;
  }
  double c0 = 1.0, c1 = 2.0 * lambda * t;
  out[1] = (1.0 + lambda) / lambda * c1;
  for (int k = 1; k < n; ++k) {
    const double c2 = (2.0 * (k + lambda) * t * c1 - (k + 2.0 * lambda - 1.0) * c0) / (k + 1.0);
    c0 = c1;
    c1 = c2;
    out[k + 1] = (k + 1.0 + lambda) / lambda * c2;
  }
}

double gegenbauer_normalized(double lambda, int n, double t) {
  std::vector<double> buf(n + 1);
  gegenbauer_normalized_all(lambda, n, t, buf.data());
  return buf[n];
}

void jacobi_all(double a, double b, int n, double t, double* out) {
  out[0] = 1.0;
  if (n == 0) return;
  out[1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * t;
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    const double c2 = (s + 1.0) * ((s + 2.0) * s * t + a * a - b * b);
    const double c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    out[k + 1] = (c2 * out[k] - c3 * out[k - 1]) / c1;
  }
}

double jacobi(double a, double b, int n, double t) {
  std::vector<double> buf(n + 1);
  jacobi_all(a, b, n, t, buf.data());
  return buf[n];
}

double jacobi_norm_sq(double a, double b, int n) {
  if (n == 0)
    return std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                    std::lgamma(a + b + 2.0));
  const long double la = a, lb = b, ln = n;
  return static_cast<double>(
      std::exp((la + lb + 1) * std::log(2.0L) - std::log(2 * ln + la + lb + 1) +
               std::lgamma(ln + la + 1) + std::lgamma(ln + lb + 1) -
               std::lgamma(ln + la + lb + 1) - std::lgamma(ln + 1)));
}

namespace {

// P_N and its derivative at t; long double for the weight and certification passes
template <class T>
void jacobi_with_derivative(T a, T b, int N, T t, T& p, T& dp) {
  T p0 = 1, p1 = (a - b) / 2 + (a + b + 2) / 2 * t;
  if (N == 1) {
    p = p1;
    dp = (a + b + 2) / 2;
    return;
  }
  for (int k = 1; k < N; ++k) {
    const T s = 2 * k + a + b;
    const T c1 = 2 * (k + 1) * (k + a + b + 1) * s;
    const T c2 = (s + 1) * ((s + 2) * s * t + a * a - b * b);
    const T c3 = 2 * (k + a) * (k + b) * (s + 2);
    const T p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  // (2N+a+b)(1-t^2) P_N' = N[(a-b) - (2N+a+b) t] P_N + 2(N+a)(N+b) P_{N-1}
  const T s = 2 * N + a + b;
  dp = (N * ((a - b) - s * t) * p1 + 2 * (N + a) * (N + b) * p0) / (s * (1 - t * t));
}

void jacobi_all_ld(long double a, long double b, int n, long double t, long double* out) {
  out[0] = 1;
  if (n == 0) return;
  out[1] = (a - b) / 2 + (a + b + 2) / 2 * t;
  for (int k = 1; k < n; ++k) {
    const long double s = 2 * k + a + b;
    const long double c1 = 2 * (k + 1) * (k + a + b + 1) * s;
    const long double c2 = (s + 1) * ((s + 2) * s * t + a * a - b * b);
    const long double c3 = 2 * (k + a) * (k + b) * (s + 2);
    out[k + 1] = (c2 * out[k] - c3 * out[k - 1]) / c1;
  }
}

std::vector<double> golub_welsch_nodes(double a, double b, int N) {
  Eigen::VectorXd diag(N), sub(N > 1 ? N - 1 : 0);
  for (int k = 0; k < N; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < N) {
      const double kk = k + 1.0, s1 = 2.0 * kk + a + b;
      sub(k) = std::sqrt(4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) /
                         (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + N);
  return x;
}

bool newton_polish(double a, double b, int N, std::vector<double>& x, bool deflate) {
  for (int i = 0; i < N; ++i) {
    double z = x[i];
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      jacobi_with_derivative(a, b, N, z, p, dp);
      double denom = dp;
      if (deflate) {
        double sum = 0.0;
        for (int j = 0; j < i; ++j) sum += 1.0 / (z - x[j]);
        denom = dp - p * sum;
      }
      const double step = p / denom;
      z -= step;
      if (!(z > -1.0 && z < 1.0)) return false;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
    x[i] = z;
  }
  std::sort(x.begin(), x.end());
  for (int i = 1; i < N; ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

}  // namespace

QuadratureRule1D gauss_jacobi(double a, double b, int N) {
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  if (N < 1) throw DomainError("gauss_jacobi: N must be >= 1");

  std::vector<double> x(N);
  for (int i = 0; i < N; ++i) {
    // Chebyshev-like guesses, descending
    const double th = kPi * (i + 0.75 + 0.5 * a) / (N + 0.5 * (a + b + 1.0));
    x[i] = std::cos(std::clamp(th, 1e-3, kPi - 1e-3));
  }
  if (!newton_polish(a, b, N, x, true)) {
    x = golub_welsch_nodes(a, b, N);
    if (!newton_polish(a, b, N, x, false)) {
      std::ostringstream msg;
      msg << "gauss_jacobi: Newton iteration failed for alpha=" << a << ", beta=" << b
          << ", N=" << N;
      throw ConvergenceError(msg.str());
    }
  }

  QuadratureRule1D rule;
  rule.alpha = a;
  rule.beta = b;
  rule.nodes = x;
  rule.weights.resize(N);
  // lgamma values reach ~1e4 at N ~ 2000; long double keeps the difference to ~1e-16
  const long double la = a, lb = b, lN = N;
  const long double logc = std::lgamma(lN + la + 1) + std::lgamma(lN + lb + 1) -
                           std::lgamma(lN + la + lb + 1) - std::lgamma(lN + 1) +
                           (la + lb + 1) * std::log(2.0L);
  for (int i = 0; i < N; ++i) {
    long double p, dp, t = x[i];
    jacobi_with_derivative<long double>(a, b, N, t, p, dp);
    rule.weights[i] = static_cast<double>(std::exp(logc) /
                                          ((1 - t * t) * dp * dp));
  }

  // certify with orthonormal moments up to degree 2N-1
  const int deg = 2 * N - 1;
  std::vector<long double> scale(deg + 1), buf(deg + 1), mom(deg + 1, 0.0L);
  for (int j = 0; j <= deg; ++j) scale[j] = 1.0L / std::sqrt((long double)jacobi_norm_sq(a, b, j));
  for (int i = 0; i < N; ++i) {
    jacobi_all_ld(a, b, deg, x[i], buf.data());
    for (int j = 0; j <= deg; ++j) mom[j] += rule.weights[i] * buf[j] * scale[j];
  }
  const double m0 = std::sqrt(jacobi_norm_sq(a, b, 0));
  double res = static_cast<double>(std::abs(mom[0] - m0) / m0);
  for (int j = 1; j <= deg; ++j)
    res = std::max(res, static_cast<double>(std::abs(mom[j]) / m0));
  rule.residual = res;
  if (!(res <= 1e-12)) {
    std::ostringstream msg;
    msg << "gauss_jacobi: moment certification failed (residual " << res << ") for alpha=" << a
        << ", beta=" << b << ", N=" << N;
    throw CertificationError(msg.str());
  }
  rule.exact_degree = deg;
  return rule;
}

}  // namespace ballwidth
