#include "ballwidth/lq_norm.hpp"

#include "ballwidth/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ballwidth {

namespace {

constexpr double kPi = std::numbers::pi;

bool even_integer(double q) { return q == std::floor(q) && std::fmod(q, 2.0) == 0.0; }

}  // namespace

Eigen::MatrixXd sup_grid(int d, int K) {
  if (d == 1) {
    Eigen::MatrixXd g(1, K + 1);
    for (int i = 0; i <= K; ++i) g(0, i) = std::cos(kPi * i / K);
    return g;
  }
  const int Kr = K;                      // radii cos(pi j / (2 Kr)), j = 0..Kr
  const int Kphi = 2 * K;
  std::vector<Eigen::VectorXd> pts;
  pts.emplace_back(Eigen::VectorXd::Zero(d));
  for (int j = 0; j < Kr; ++j) {
    const double r = std::cos(0.5 * kPi * j / Kr);
    if (d == 2) {
      for (int l = 0; l < Kphi; ++l) {
        const double ph = 2.0 * kPi * l / Kphi;
        Eigen::Vector2d v(r * std::cos(ph), r * std::sin(ph));
        pts.emplace_back(v);
      }
    } else {
      const int Kth = K;
      for (int a = 0; a <= Kth; ++a) {
        const double th = kPi * a / Kth, st = std::sin(th), ct = std::cos(th);
        const int nph = (a == 0 || a == Kth) ? 1 : Kphi;
        for (int l = 0; l < nph; ++l) {
          const double ph = 2.0 * kPi * l / nph;
          Eigen::Vector3d v(r * st * std::cos(ph), r * st * std::sin(ph), r * ct);
          pts.emplace_back(v);
        }
      }
    }
  }
  Eigen::MatrixXd g(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) g.col(i) = pts[i];
  return g;
}

LqNorm::LqNorm(const SpaceParams& params, int N, double q, LqOptions opt)
    : params_(params), N_(N), q_(q), opt_(opt) {
  if (!(q >= 1.0)) throw DomainError("LqNorm: q must be >= 1");
  if (q != 2.0) basis_ = std::make_shared<BallBasis>(params, N);
}

LqNorm::Level LqNorm::make_level(int i) const {
  Level L;
  if (std::isinf(q_)) {
    const int base = std::max(8, opt_.sup_base_factor * std::max(N_, 1));
    const int K = params_.d == 1 ? (base << i) : (std::max(8, 2 * N_ + 8) << i);
    L.pts = sup_grid(params_.d, K);
  } else {
    const int deg0 = static_cast<int>(std::ceil(q_)) * N_;
    const int deg = even_integer(q_) ? q_ * N_ : (deg0 + 2) << i;
    const CubatureRule r = product_rule(params_, static_cast<int>(deg));
    L.pts = r.points();
    L.w = r.weights;
  }
  const std::int64_t entries = L.pts.cols() * basis_->size();
  if (entries <= opt_.max_cached_entries) L.phi = basis_->eval_matrix(L.pts, N_);
  return L;
}

const LqNorm::Level& LqNorm::level(int i) const {
  std::lock_guard<std::mutex> lock(mtx_);
  while (static_cast<int>(levels_.size()) <= i) levels_.push_back(nullptr);
  if (!levels_[i]) levels_[i] = std::make_unique<Level>(make_level(i));
  return *levels_[i];
}

Eigen::VectorXd LqNorm::values(const Level& L, const Eigen::VectorXd& c) const {
  if (L.phi.size()) return L.phi * c;
  Eigen::VectorXd out(L.pts.cols()), buf(basis_->size());
  for (Eigen::Index i = 0; i < L.pts.cols(); ++i) {
    basis_->eval_all(L.pts.col(i).data(), N_, buf.data());
    out(i) = buf.dot(c);
  }
  return out;
}

double LqNorm::level_norm(const Level& L, const Eigen::VectorXd& c) const {
  const Eigen::VectorXd v = values(L, c);
  if (std::isinf(q_)) return v.cwiseAbs().maxCoeff();
  return std::pow((L.w.array() * v.array().abs().pow(q_)).sum(), 1.0 / q_);
}

double LqNorm::operator()(const CoeffVector& e) const {
  if (e.max_degree() > N_) {
    std::ostringstream msg;
    msg << "LqNorm: vector degree " << e.max_degree() << " exceeds configured degree " << N_;
    throw DomainError(msg.str());
  }
  const Eigen::VectorXd c = e.max_degree() == N_ ? e.data() : e.resized(N_).data();
  if (q_ == 2.0) return c.norm();
  if (even_integer(q_)) return level_norm(level(0), c);

  const double tol = std::isinf(q_) ? opt_.sup_tolerance : opt_.refine_tolerance;
  double prev = level_norm(level(0), c);
  for (int i = 1; i < opt_.max_levels; ++i) {
    const double cur = level_norm(level(i), c);
    if (std::abs(cur - prev) <= tol * std::max(std::abs(cur), 1e-300) || cur == prev) return cur;
    prev = cur;
    if (i + 1 == opt_.max_levels) {
      std::ostringstream msg;
      msg << "LqNorm: refinement did not converge for q=" << q_ << " (last estimates " << prev
          << ", " << cur << ")";
      throw ConvergenceError(msg.str());
    }
  }
  return prev;
}

double lq_error(const CoeffVector& f, const CoeffVector& g, double q, const SpaceParams& params) {
  const CoeffVector diff = f - g;
  const LqNorm norm(params, diff.max_degree(), q);
  return norm(diff);
}

}  // namespace ballwidth
