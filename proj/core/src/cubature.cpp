#include "ballwidth/cubature.hpp"

#include "ballwidth/ball_basis.hpp"
#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/errors.hpp"
#include "ballwidth/lq_norm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace ballwidth {

namespace {

constexpr double kPi = std::numbers::pi;

double hemisphere_area(int d) {
  return std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

// G += sign * sum_{i in rows} s_i phi_i phi_i^T  (lower triangle)
void gram_update(Eigen::MatrixXd& G, const Eigen::MatrixXd& Phi, const Eigen::VectorXd& s,
                 const std::vector<Eigen::Index>& rows, double sign) {
  constexpr Eigen::Index chunk = 1024;
  for (std::size_t start = 0; start < rows.size(); start += chunk) {
    const auto len = std::min<std::size_t>(chunk, rows.size() - start);
    Eigen::MatrixXd B(Phi.cols(), len);
    for (std::size_t c = 0; c < len; ++c) {
      const auto i = rows[start + c];
      B.col(c) = std::sqrt(s(i)) * Phi.row(i).transpose();
    }
    G.selfadjointView<Eigen::Lower>().rankUpdate(B, sign);
  }
}

}  // namespace

double profile_weight(int d, double mu, double n, const double* x) {
  double r2 = 0.0;
  for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
  const double z = std::sqrt(std::max(0.0, 1.0 - r2));
  return std::pow(n, -d) * std::pow(1.0 / n + z, 2.0 * mu);
}

std::pair<double, double> profile_band(const CubatureRule& rule, double n) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  const int d = rule.params.d;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double ratio =
        rule.weights(i) / profile_weight(d, rule.params.mu, n, rule.points().col(i).data());
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

Eigen::VectorXd voronoi_mass(const SeparatedSet& set, double mu, std::int64_t samples,
                             std::uint64_t seed) {
  const int d = set.d;
  const Eigen::MatrixXd L = hemisphere_sequence(d, samples, seed);
  Eigen::VectorXd dist;
  const Eigen::VectorXi who = nearest_points(set.points, project(L), &dist);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(set.size());
  for (Eigen::Index s = 0; s < L.cols(); ++s) mass(who(s)) += std::pow(L(d, s), 2.0 * mu);
  mass *= hemisphere_area(d) / static_cast<double>(samples);
  // cells that caught no sample get a fraction of the smallest positive mass
  double minpos = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < mass.size(); ++i)
    if (mass(i) > 0) minpos = std::min(minpos, mass(i));
  for (Eigen::Index i = 0; i < mass.size(); ++i)
    if (!(mass(i) > 0)) mass(i) = 0.5 * minpos;
  return mass;
}

CubatureRule cubature_weights(const SeparatedSet& set, const SpaceParams& params, int degree,
                              const CubatureOptions& opt) {
  if (set.d != params.d) throw DomainError("cubature_weights: set dimension != params.d");
  const std::int64_t M = poly_dim(params.d, degree);
  const std::int64_t P = set.size();
  auto counting_error = [&] {
    std::ostringstream msg;
    msg << "cubature_weights: infeasible, " << P << " points cannot carry positive weights exact"
        << " on dim Pi_" << degree << "^" << params.d << " = " << M << " moments";
    return InfeasibleError(msg.str());
  };
  // fewer nodes than moments can only work for Gauss-type sets
  if (2 * P < M) throw counting_error();
  const BallBasis basis(params, degree);
  const Eigen::MatrixXd Phi = basis.eval_matrix(set.points, degree);  // P x M
  const double b0 = 1.0 / std::sqrt(weight_norm_const(params.d, params.mu));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M);
  rhs(0) = b0;

  const auto samples = static_cast<std::int64_t>(std::max(20000.0, opt.mass_samples_factor * P));
  Eigen::VectorXd w0 = voronoi_mass(set, params.mu, samples, opt.seed);
  w0 *= (b0 * b0) / w0.sum();  // total mass 1/b_d^mu

  std::vector<char> fixed(P, 0);
  std::vector<Eigen::Index> all(P);
  for (Eigen::Index i = 0; i < P; ++i) all[i] = i;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(M, M);
  gram_update(G, Phi, w0, all, 1.0);

  Eigen::VectorXd w(P);
  std::int64_t n_fixed = 0;
  bool done = false;
  for (int iter = 0; iter < opt.max_active_iterations && !done; ++iter) {
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    bool use_llt = P >= M;
    if (use_llt) {
      llt.compute(G);
      use_llt = llt.info() == Eigen::Success;
    }
    if (!use_llt) {
      // singular Gram matrix: minimum-norm multipliers; the certificate decides feasibility
      if (M > 3000) {
        std::ostringstream msg;
        msg << "cubature_weights: infeasible, moment Gram matrix lost definiteness after fixing "
            << n_fixed << " of " << P << " weights; use a smaller epsilon";
        throw InfeasibleError(msg.str());
      }
      eig.compute(G);
    }
    auto solve = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
      if (use_llt) return llt.solve(r);
      const auto& ev = eig.eigenvalues();
      const double cut = 1e-12 * ev.cwiseAbs().maxCoeff();
      Eigen::VectorXd t = eig.eigenvectors().transpose() * r;
      for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = ev(i) > cut ? t(i) / ev(i) : 0.0;
      return eig.eigenvectors() * t;
    };
    for (Eigen::Index i = 0; i < P; ++i) w(i) = fixed[i] ? opt.floor * w0(i) : w0(i);
    for (int refine = 0; refine < 4; ++refine) {
      const Eigen::VectorXd r = rhs - Phi.transpose() * w;
      const Eigen::VectorXd y = solve(r);
      const Eigen::VectorXd corr = Phi * y;
      for (Eigen::Index i = 0; i < P; ++i)
        if (!fixed[i]) w(i) += w0(i) * corr(i);
    }
    std::vector<Eigen::Index> violators;
    for (Eigen::Index i = 0; i < P; ++i)
      if (!fixed[i] && w(i) < opt.floor * w0(i)) violators.push_back(i);
    if (violators.empty()) {
      done = true;
      break;
    }
    for (auto i : violators) fixed[i] = 1;
    n_fixed += static_cast<std::int64_t>(violators.size());
    gram_update(G, Phi, w0, violators, -1.0);
  }
  if (!done) throw InfeasibleError("cubature_weights: active-set iteration did not settle");

  CubatureRule rule;
  rule.params = params;
  rule.set = set;
  rule.weights = w;
  rule.exact_degree = degree;
  rule.residual = (Phi.transpose() * w - rhs).cwiseAbs().maxCoeff() / b0;
  rule.floored = n_fixed;
  rule.profile_n = opt.profile_n > 0 ? opt.profile_n : std::max(1.0, degree / 4.0);
  std::tie(rule.profile_c1, rule.profile_c2) = profile_band(rule, rule.profile_n);
  if (!(rule.residual <= opt.tolerance) || !(w.minCoeff() > 0)) {
    if (P < M) throw counting_error();
    std::ostringstream msg;
    msg << "cubature_weights: certificate failed (residual " << rule.residual
        << ", min weight " << w.minCoeff() << ")";
    throw InfeasibleError(msg.str());
  }
  return rule;
}

CubatureRule product_rule(const SpaceParams& params, int degree) {
  const int d = params.d;
  if (d < 1 || d > 3) throw UnsupportedDimension("product_rule: d must be 1, 2 or 3");
  if (degree < 0) throw DomainError("product_rule: negative degree");
  const double alpha = params.mu - 0.5;
  CubatureRule rule;
  rule.params = params;
  rule.set.d = d;
  rule.exact_degree = degree;
  if (d == 1) {
    const auto g = gauss_jacobi(alpha, alpha, (degree + 2) / 2);
    rule.set.points = Eigen::Map<const Eigen::RowVectorXd>(g.nodes.data(), g.size());
    rule.weights = Eigen::Map<const Eigen::VectorXd>(g.weights.data(), g.size());
    return rule;
  }
  const double beta = 0.5 * (d - 2);
  const auto rad = gauss_jacobi(alpha, beta, (degree / 2 + 2) / 2);
  const double scale = std::exp2(-alpha - beta - 2.0);

  std::vector<Eigen::VectorXd> dirs;
  std::vector<double> dw;
  const int nphi = degree + 1;
  if (d == 2) {
    for (int l = 0; l < nphi; ++l) {
      const double ph = 2.0 * kPi * l / nphi;
      Eigen::Vector2d v(std::cos(ph), std::sin(ph));
      dirs.emplace_back(v);
      dw.push_back(2.0 * kPi / nphi);
    }
  } else {
    const auto gl = gauss_jacobi(0.0, 0.0, (degree + 2) / 2);
    for (std::size_t a = 0; a < gl.size(); ++a) {
      const double ct = gl.nodes[a], st = std::sqrt(1.0 - ct * ct);
      for (int l = 0; l < nphi; ++l) {
        const double ph = 2.0 * kPi * l / nphi;
        Eigen::Vector3d v(st * std::cos(ph), st * std::sin(ph), ct);
        dirs.emplace_back(v);
        dw.push_back(gl.weights[a] * 2.0 * kPi / nphi);
      }
    }
  }
  const Eigen::Index P = static_cast<Eigen::Index>(rad.size() * dirs.size());
  rule.set.points.resize(d, P);
  rule.weights.resize(P);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double r = std::sqrt(0.5 * (1.0 + rad.nodes[i]));
    for (std::size_t a = 0; a < dirs.size(); ++a, ++k) {
      rule.set.points.col(k) = r * dirs[a];
      rule.weights(k) = scale * rad.weights[i] * dw[a];
    }
  }
  return rule;
}

double moment_residual(const CubatureRule& rule, int degree) {
  const BallBasis basis(rule.params, degree);
  const double b0 = 1.0 / std::sqrt(weight_norm_const(rule.params.d, rule.params.mu));
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(basis.size()), buf(basis.size());
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    basis.eval_all(rule.points().col(i).data(), degree, buf.data());
    mom += rule.weights(i) * buf;
  }
  mom(0) -= b0;
  return mom.cwiseAbs().maxCoeff() / b0;
}

CubatureRule search_rule(const SpaceParams& params, double scale, int degree, double profile_n,
                         const RuleSearch& search) {
  const std::int64_t M = poly_dim(params.d, degree);
  if (M > search.max_moments) {
    std::ostringstream msg;
    msg << "rule search: dim Pi_" << degree << "^" << params.d << " = " << M
        << " moments exceeds the configured cap " << search.max_moments;
    throw InfeasibleError(msg.str());
  }
  std::ostringstream log;
  for (double gamma = search.gamma; gamma >= search.min_gamma; gamma *= search.shrink) {
    const double eps = gamma * scale;
    if (!(eps < kPi / 2)) continue;
    if (expected_cardinality(params.d, eps) < 0.5 * search.min_oversampling * M) continue;
    SeparatedSet set = build_separated(params.d, eps, search.seed);
    if (set.size() < search.min_oversampling * M) {
      log << " gamma=" << gamma << ": " << set.size() << " points;";
      continue;
    }
    CubatureOptions copt = search.cubature;
    copt.profile_n = profile_n > 0 ? profile_n : 2.0 / eps;
    try {
      CubatureRule rule = cubature_weights(set, params, degree, copt);
      rule.gamma = gamma;
      if (search.max_profile_ratio > 0 && !(rule.profile_ratio() <= search.max_profile_ratio)) {
        log << " gamma=" << gamma << ": profile band " << rule.profile_ratio() << ";";
        continue;
      }
      return rule;
    } catch (const InfeasibleError& e) {
      log << " gamma=" << gamma << ": " << e.what() << ";";
    }
  }
  std::ostringstream msg;
  msg << "rule search failed for degree " << degree << " (dim " << M << "):" << log.str()
      << " use a smaller epsilon";
  throw InfeasibleError(msg.str());
}

CubatureRule lemma_rule(const SpaceParams& params, int n, const RuleSearch& search) {
  if (n < 1) throw DomainError("lemma_rule: n must be >= 1");
  return search_rule(params, 1.0 / n, 4 * n, 0.0, search);
}

MzRatio mz_ratio(const CubatureRule& rule, int n, double q, int trials, std::uint64_t seed) {
  if (rule.exact_degree < 2 * n) throw QuadratureDegreeError("mz_ratio: rule degree below 2n");
  const SpaceParams& p = rule.params;
  const BallBasis basis(p, n);
  const Eigen::MatrixXd Phi = basis.eval_matrix(rule.points(), n);
  const LqNorm cont(p, n, q);
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  MzRatio out{std::numeric_limits<double>::infinity(), 0.0};
  for (int t = 0; t < trials; ++t) {
    CoeffVector c(p, n);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()(i) = normal(eng);
    const Eigen::VectorXd v = Phi * c.data();
    double disc;
    if (std::isinf(q)) {
      disc = v.cwiseAbs().maxCoeff();
    } else {
      disc = std::pow((rule.weights.array() * v.array().abs().pow(q)).sum(), 1.0 / q);
    }
    const double ratio = disc / cont(c);
    out.low = std::min(out.low, ratio);
    out.high = std::max(out.high, ratio);
  }
  return out;
}

double weight_sum_check(const CubatureRule& rule, double beta, int n) {
  const double mu = rule.params.mu;
  if (!(mu > 0)) throw DomainError("weight_sum_check: requires mu > 0");
  if (!(beta >= 0 && beta < 1.0 / (2.0 * mu))) {
    std::ostringstream msg;
    msg << "weight_sum_check: beta must lie in [0, 1/(2 mu)) = [0, " << 1.0 / (2.0 * mu)
        << "), got " << beta;
    throw DomainError(msg.str());
  }
  const double s = rule.weights.array().pow(-beta).sum();
  return s / std::pow(static_cast<double>(n), rule.params.d * (1.0 + beta));
}

double default_block_gamma(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 1.6;
    default: return 2.0;
  }
}

MzBlockData mz_block_scalings(const CubatureRule& rule, int k, double q) {
  MzBlockData out;
  out.k = k;
  out.q = q;
  out.rule = rule;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  out.S = rule.weights.array().sqrt();
  out.V = rule.weights.array().pow(-0.5 + iq);
  out.R = out.V.cwiseProduct(out.S);  // R = V S entrywise, by construction
  return out;
}

MzBlockData mz_block_data(const SpaceParams& params, int k, double q, const MzBlockOptions& opt) {
  if (k < 1) throw DomainError("mz_block_data: k must be >= 1");
  const int degree = opt.degree > 0 ? opt.degree : (opt.full_degree ? (1 << (k + 4)) : 3 * (1 << k));
  RuleSearch search;
  search.gamma = opt.gamma > 0 ? opt.gamma : default_block_gamma(params.d);
  search.seed = opt.seed + static_cast<std::uint64_t>(k);
  search.max_moments = opt.max_moments;
  search.max_profile_ratio = 0.0;
  const CubatureRule rule =
      search_rule(params, std::ldexp(1.0, -(k + 2)), degree, std::ldexp(1.0, k + 2), search);
  return mz_block_scalings(rule, k, q);
}

}  // namespace ballwidth
