#include "ballwidth/ball_basis.hpp"

#include "ballwidth/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ballwidth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kQuadratureNormMax = 256;

int harmonic_count(int d, int l) {
  if (d == 1) return l <= 1 ? 1 : 0;
  if (d == 2) return l == 0 ? 1 : 2;
  return 2 * l + 1;
}

}  // namespace

BallBasis::BallBasis(const SpaceParams& params, int max_degree, BasisOptions opt)
    : params_(params), max_degree_(max_degree) {
  if (params.d < 1 || params.d > 3) {
    std::ostringstream msg;
    msg << "explicit orthonormal basis is available for d in {1,2,3} only (got d=" << params.d
        << ")";
    throw UnsupportedDimension(msg.str());
  }
  if (max_degree < 0) throw DomainError("BallBasis: max_degree must be >= 0");
  if (!(params.mu >= 0)) throw DomainError("BallBasis: mu must be >= 0");

  const double b_closed = weight_norm_const(params.d, params.mu);
  const double b_num = weight_norm_const_numeric(params.d, params.mu);
  if (std::abs(b_closed - b_num) > 1e-12 * b_closed) {
    std::ostringstream msg;
    msg << "weight normalization cross-check failed: closed " << b_closed << " vs numeric "
        << b_num;
    throw CertificationError(msg.str());
  }

  const int d = params.d;
  const double alpha = params.mu - 0.5;
  const int lmax = (d == 1) ? std::min(1, max_degree) : max_degree;

  harm_offset_.assign(lmax + 2, 0);
  for (int l = 0; l <= lmax; ++l) harm_offset_[l + 1] = harm_offset_[l] + harmonic_count(d, l);

  norm_.resize(lmax + 1);
  for (int l = 0; l <= lmax; ++l) {
    const double beta = l + 0.5 * (d - 2);
    const int jmax = (max_degree - l) / 2;
    norm_[l].resize(jmax + 1);
    for (int j = 0; j <= jmax; ++j) {
      // radial norm^2 = 2^{-alpha-beta-2} h_j, h_j by a (j+1)-point Gauss-Jacobi rule up to
      // kQuadratureNormMax; the closed form is used above (rule cost grows cubically in j)
      const double h_closed = jacobi_norm_sq(alpha, beta, j);
      double h = h_closed;
      if (j <= kQuadratureNormMax) {
        const QuadratureRule1D q = gauss_jacobi(alpha, beta, j + 1);
        h = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          const double p = jacobi(alpha, beta, j, q.nodes[i]);
          h += q.weights[i] * p * p;
        }
      }
      if (std::abs(h - h_closed) > 1e-10 * h_closed) {
        std::ostringstream msg;
        msg << "radial normalization cross-check failed at (j=" << j << ", l=" << l << ")";
        throw CertificationError(msg.str());
      }
      norm_[l][j] =
          (1.0 + opt.norm_perturbation) / std::sqrt(std::exp2(-alpha - beta - 2.0) * h);
    }
  }

  offsets_.assign(max_degree + 2, 0);
  for (int n = 0; n <= max_degree; ++n) {
    for (int j = 0; 2 * j <= n; ++j) {
      const int l = n - 2 * j;
      if (l > lmax) continue;
      for (int h = 0; h < harmonic_count(d, l); ++h) entries_.push_back({j, l, h});
    }
    offsets_[n + 1] = static_cast<std::int64_t>(entries_.size());
    if (offsets_[n + 1] - offsets_[n] != block_dim(d, n))
      throw Error("BallBasis: internal enumeration does not match block dimension");
  }
}

std::int64_t BallBasis::flat(BasisIndex idx) const {
  if (idx.n < 0 || idx.n > max_degree_) throw DomainError("BasisIndex degree out of range");
  if (idx.k < 1 || idx.k > block_dim(params_.d, idx.n))
    throw DomainError("BasisIndex k outside 1..a_n^d");
  return offsets_[idx.n] + idx.k - 1;
}

BasisIndex BallBasis::index(std::int64_t f) const {
  if (f < 0 || f >= size()) throw DomainError("flat basis index out of range");
  int n = 0;
  while (offsets_[n + 1] <= f) ++n;
  return {n, static_cast<int>(f - offsets_[n]) + 1};
}

void BallBasis::harmonics(const double* x, int lmax, std::vector<double>& out) const {
  const int d = params_.d;
  out.assign(harm_offset_[lmax + 1], 0.0);
  if (d == 1) {
    const double c = 1.0 / std::sqrt(2.0);
    out[0] = c;
    if (lmax >= 1) out[1] = c * x[0];
    return;
  }
  if (d == 2) {
    out[0] = 1.0 / std::sqrt(2.0 * kPi);
    const double c = 1.0 / std::sqrt(kPi);
    double re = 1.0, im = 0.0;
    for (int l = 1; l <= lmax; ++l) {
      const double nr = re * x[0] - im * x[1];
      const double ni = re * x[1] + im * x[0];
      re = nr;
      im = ni;
      out[harm_offset_[l]] = c * re;
      out[harm_offset_[l] + 1] = c * im;
    }
    return;
  }
  // d == 3: normalized solid associated Legendre factors times (x+iy)^m
  const double z = x[2];
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double sq2 = std::sqrt(2.0);
  double wr = 1.0, wi = 0.0;  // (x+iy)^m
  double smm = 1.0;
  std::vector<double> pl(lmax + 1);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) {
      smm *= std::sqrt((2.0 * m - 1.0) / (2.0 * m));
      const double nr = wr * x[0] - wi * x[1];
      const double ni = wr * x[1] + wi * x[0];
      wr = nr;
      wi = ni;
    }
    pl[m] = std::sqrt((2.0 * m + 1.0) / (4.0 * kPi)) * smm;
    if (m + 1 <= lmax) pl[m + 1] = std::sqrt(2.0 * m + 3.0) * z * pl[m];
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      pl[l] = a * (z * pl[l - 1] - b * r2 * pl[l - 2]);
    }
    for (int l = m; l <= lmax; ++l) {
      const int base = harm_offset_[l];
      if (m == 0) {
        out[base] = pl[l];
      } else {
        out[base + 2 * m - 1] = sq2 * pl[l] * wr;
        out[base + 2 * m] = sq2 * pl[l] * wi;
      }
    }
  }
}

void BallBasis::eval_all(const double* x, int degree, double* out) const {
  if (degree > max_degree_) throw DomainError("eval_all: degree exceeds basis max_degree");
  const int d = params_.d;
  const int lmax = (d == 1) ? std::min(1, degree) : degree;
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  const double t = 2.0 * r2 - 1.0;
  const double alpha = params_.mu - 0.5;

  thread_local std::vector<double> harm;
  thread_local std::vector<double> radial;
  thread_local std::vector<int> radial_off;
  harmonics(x, lmax, harm);

  radial_off.assign(lmax + 2, 0);
  for (int l = 0; l <= lmax; ++l) radial_off[l + 1] = radial_off[l] + (degree - l) / 2 + 1;
  radial.resize(radial_off[lmax + 1]);
  for (int l = 0; l <= lmax; ++l) {
    const int jmax = (degree - l) / 2;
    double* rp = radial.data() + radial_off[l];
    jacobi_all(alpha, l + 0.5 * (d - 2), jmax, t, rp);
    for (int j = 0; j <= jmax; ++j) rp[j] *= norm_[l][j];
  }

  const std::int64_t n_out = offsets_[degree + 1];
  for (std::int64_t f = 0; f < n_out; ++f) {
    const Entry& e = entries_[f];
    out[f] = radial[radial_off[e.l] + e.j] * harm[harm_offset_[e.l] + e.h];
  }
}

Eigen::VectorXd BallBasis::eval_all(const Point& x, int degree) const {
  if (x.size() != params_.d) throw DomainError("eval_all: point dimension mismatch");
  Eigen::VectorXd out(size(degree));
  eval_all(x.data(), degree, out.data());
  return out;
}

double BallBasis::eval(BasisIndex idx, const Point& x) const {
  const std::int64_t f = flat(idx);
  return eval_all(x, idx.n)(f);
}

Eigen::MatrixXd BallBasis::eval_matrix(const Eigen::MatrixXd& pts, int degree) const {
  if (pts.rows() != params_.d) throw DomainError("eval_matrix: point dimension mismatch");
  const std::int64_t m = size(degree);
  Eigen::MatrixXd out(pts.cols(), m);
  Eigen::VectorXd buf(m);
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    eval_all(pts.col(i).data(), degree, buf.data());
    out.row(i) = buf.transpose();
  }
  return out;
}

}  // namespace ballwidth
