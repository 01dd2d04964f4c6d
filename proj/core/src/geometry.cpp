#include "ballwidth/errors.hpp"
#include "ballwidth/points.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ballwidth {

double rho_tilde(const double* x, const double* y, int d) {
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (int i = 0; i < d; ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  const double arg = xy + std::sqrt(std::max(0.0, 1.0 - xx)) * std::sqrt(std::max(0.0, 1.0 - yy));
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double rho_tilde(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw DomainError("rho_tilde: dimension mismatch");
  return rho_tilde(x.data(), y.data(), static_cast<int>(x.size()));
}

Eigen::MatrixXd lift(const Eigen::MatrixXd& pts) {
  Eigen::MatrixXd out(pts.rows() + 1, pts.cols());
  out.topRows(pts.rows()) = pts;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    out(pts.rows(), i) = std::sqrt(std::max(0.0, 1.0 - pts.col(i).squaredNorm()));
  return out;
}

Eigen::MatrixXd project(const Eigen::MatrixXd& lifted) {
  return lifted.topRows(lifted.rows() - 1);
}

namespace {

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, v = 0.0;
  while (i > 0) {
    v += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return v;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

Eigen::MatrixXd hemisphere_sequence(int d, std::int64_t count, std::uint64_t seed) {
  if (d < 1 || d + 1 > static_cast<int>(std::size(kPrimes)))
    throw DomainError("hemisphere_sequence: unsupported dimension");
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shift(d + 1);
  for (auto& s : shift) s = unif(eng);

  Eigen::MatrixXd out(d + 1, count);
  constexpr double pi = std::numbers::pi;
  for (std::int64_t i = 0; i < count; ++i) {
    if (d == 1) {
      const double th = pi * (static_cast<double>(i) + shift[0]) / static_cast<double>(count);
      out(0, i) = std::cos(th);
      out(1, i) = std::sin(th);
    } else if (d == 2) {
      // height is uniform on the hemisphere (Archimedes), angle uniform
      const double u = std::fmod(radical_inverse(i + 1, 2) + shift[0], 1.0);
      const double v = std::fmod(radical_inverse(i + 1, 3) + shift[1], 1.0);
      const double z = u, rr = std::sqrt(std::max(0.0, 1.0 - z * z)), ph = 2.0 * pi * v;
      out(0, i) = rr * std::cos(ph);
      out(1, i) = rr * std::sin(ph);
      out(2, i) = z;
    } else {
      double nrm = 0.0;
      for (int k = 0; k <= d; ++k) {
        double u = std::fmod(radical_inverse(i + 1, kPrimes[k]) + shift[k], 1.0);
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        const double g = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
        out(k, i) = g;
        nrm += g * g;
      }
      out.col(i) /= std::sqrt(nrm);
      out(d, i) = std::abs(out(d, i));
    }
  }
  return out;
}

}  // namespace ballwidth
