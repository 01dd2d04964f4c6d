#include "ballwidth/near_optimal.hpp"

#include "ballwidth/errors.hpp"
#include "ballwidth/lq_norm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace ballwidth {

namespace {

int block_out_degree(int k) { return (1 << (k + 1)) - 1; }

Eigen::VectorXd eta_diag(const BallBasis& basis, int degree, int k) {
  Eigen::VectorXd e(basis.size(degree));
  for (int j = 0; j <= degree; ++j)
    e.segment(basis.offset(j), basis.offset(j + 1) - basis.offset(j))
        .setConstant(eta(std::ldexp(static_cast<double>(j), -k)));
  return e;
}

}  // namespace

Eigen::VectorXd sample_block(const MzBlockData& block, const CoeffVector& f) {
  return synth(f, block.rule.points());
}

CoeffVector synthesize_block(const MzBlockData& block, const SpaceParams& params,
                             const Eigen::VectorXd& a) {
  const int out = block_out_degree(block.k);
  const BallBasis basis(params, out);
  const Eigen::MatrixXd Phi = basis.eval_matrix(block.rule.points(), out);
  const Eigen::VectorXd wa = block.rule.weights.cwiseProduct(a);
  Eigen::VectorXd c = Phi.transpose() * wa;
  c.array() *= eta_diag(basis, out, block.k).array();
  return CoeffVector(params, out, c);
}

double frame_bound(const MzBlockData& block, const SpaceParams& params) {
  // M_k spans degrees (2^{k-1}, 2^k]
  const int hi = 1 << block.k;
  const BallBasis basis(params, hi);
  const Eigen::MatrixXd Phi = basis.eval_matrix(block.rule.points(), hi);
  const auto first = basis.offset((1 << (block.k - 1)) + 1);
  const Eigen::MatrixXd SP =
      block.S.asDiagonal() * Phi.middleCols(first, basis.size(hi) - first);
  // nonzero spectrum of S Phi Phi^T S equals that of Phi^T S^2 Phi
  const Eigen::MatrixXd small = SP.transpose() * SP;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double synthesis_norm_estimate(const MzBlockData& block, const SpaceParams& params, double q,
                               int trials, std::uint64_t seed) {
  const LqNorm norm(params, block_out_degree(block.k), q);
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal;
  const auto& w = block.rule.weights;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd a(w.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = normal(eng);
    const double disc = std::isinf(q)
                            ? a.cwiseAbs().maxCoeff()
                            : std::pow((w.array() * a.array().abs().pow(q)).sum(), 1.0 / q);
    worst = std::max(worst, norm(synthesize_block(block, params, a)) / disc);
  }
  return worst;
}

BlockRuleCache::BlockRuleCache(const SpaceParams& params, MzBlockOptions opt)
    : params_(params), opt_(opt) {}

const CubatureRule& BlockRuleCache::rule(int k) {
  std::lock_guard<std::mutex> lock(mtx_);
  auto it = rules_.find(k);
  if (it == rules_.end()) {
    if (frozen_) throw MissingBlockRule(k);
    auto data = mz_block_data(params_, k, 2.0, opt_);
    it = rules_.emplace(k, std::make_unique<CubatureRule>(std::move(data.rule))).first;
  }
  return *it->second;
}

int BlockRuleCache::required_degree(int k) const {
  return opt_.degree > 0 ? opt_.degree : (opt_.full_degree ? (1 << (k + 4)) : 3 * (1 << k));
}

void BlockRuleCache::insert(int k, CubatureRule rule) {
  if (k < 1) throw DomainError("BlockRuleCache::insert: k must be >= 1");
  const auto& p = rule.params;
  if (p.d != params_.d || p.mu != params_.mu)
    throw DomainError("block rule " + std::to_string(k) + " was built for other (d, mu)");
  if (rule.exact_degree < required_degree(k)) {
    throw QuadratureDegreeError("block rule " + std::to_string(k) + " is exact to degree " +
                                std::to_string(rule.exact_degree) + ", needs " +
                                std::to_string(required_degree(k)));
  }
  std::lock_guard<std::mutex> lock(mtx_);
  rules_[k] = std::make_unique<CubatureRule>(std::move(rule));
}

std::int64_t dyadic_dim(int d, int k, int N) {
  auto [lo, hi] = dyadic_range(k);
  hi = std::min(hi, N);
  if (hi < lo) return 0;
  return poly_dim(d, hi) - poly_dim(d, lo - 1);
}

std::vector<std::int64_t> block_schedule(const std::vector<std::int64_t>& u, int m, int d,
                                         double epsilon) {
  std::vector<std::int64_t> n(u.size(), 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int j = static_cast<int>(i) + 1;
    if (j <= m) {
      n[i] = u[i];
    } else {
      const double e = d * (1.0 + epsilon) * (m - j) - 1.0;
      n[i] = std::min<std::int64_t>(
          u[i], static_cast<std::int64_t>(std::floor(static_cast<double>(u[i]) * std::exp2(e))));
    }
  }
  return n;
}

CoeffVector RankNOperator::apply(const CoeffVector& c) const {
  const CoeffVector in = c.max_degree() == input_degree ? c : c.resized(input_degree);
  CoeffVector out(params, output_degree);
  for (const auto& b : blocks) {
    if (b.B.size() == 0) continue;
    const auto lo = in.offset(b.in_lo);
    const auto len = in.offset(b.in_hi) + in.block_size(b.in_hi) - lo;
    out.data().head(b.B.rows()) += b.B * in.data().segment(lo, len);
  }
  return out;
}

std::int64_t RankNOperator::rank() const {
  std::int64_t r = 0;
  for (const auto& b : blocks) r += b.rank;
  return r;
}

RankNOperator assemble_near_optimal(const SpaceParams& params, std::int64_t n, double q,
                                    double delta, double epsilon, int input_degree,
                                    BlockRuleCache& cache, const NearOptimalOptions& opt) {
  if (!(q >= 1)) throw DomainError("assemble_near_optimal: q must be >= 1");
  if (!(epsilon > 0)) throw DomainError("assemble_near_optimal: epsilon must be > 0");
  if (!(delta > 0 && delta < 1)) throw DomainError("assemble_near_optimal: delta in (0,1)");
  if (input_degree < 1) throw DomainError("assemble_near_optimal: input degree must be >= 1");
  const int d = params.d;
  const double qu = q < 2 ? 2.0 : q;
  const int J = dyadic_cover(input_degree);

  std::vector<std::int64_t> u(J), dims(J);
  for (int k = 1; k <= J; ++k) {
    u[k - 1] = cache.rule(k).size();
    dims[k - 1] = dyadic_dim(d, k, input_degree);
  }
  auto total_rank = [&](int m) {
    const auto nk = block_schedule(u, m, d, epsilon);
    std::int64_t s = 0;
    for (int i = 0; i < J; ++i) s += std::min(nk[i], dims[i]);
    return s;
  };

  int m = 0;
  if (opt.C1 > 0) {
    for (int cand = 1; cand <= J; ++cand)
      if (opt.C1 * std::exp2(cand * d) <= static_cast<double>(n)) m = cand;
    if (m == 0 || total_rank(m) > n) {
      std::ostringstream msg;
      msg << "assemble_near_optimal: C1=" << opt.C1 << " gives m=" << m << " with rank "
          << (m ? total_rank(m) : 0) << " > n=" << n;
      throw InfeasibleError(msg.str());
    }
  } else {
    for (int cand = 1; cand <= J; ++cand)
      if (total_rank(cand) <= n) m = cand;
    if (m == 0) {
      std::ostringstream msg;
      msg << "assemble_near_optimal: budget n=" << n << " cannot cover block 1 (needs "
          << total_rank(1) << ")";
      throw InfeasibleError(msg.str());
    }
  }

  RankNOperator op;
  op.budget = n;
  op.q = q;
  op.q_used = qu;
  op.delta = delta;
  op.epsilon = epsilon;
  op.m = m;
  op.C1 = static_cast<double>(n) / std::exp2(m * d);
  op.input_degree = input_degree;
  op.params = params;
  const auto nk = block_schedule(u, m, d, epsilon);
  op.output_degree = 0;

  for (int k = 1; k <= J; ++k) {
    BlockComponent b;
    b.k = k;
    b.u = u[k - 1];
    b.n_k = nk[k - 1];
    b.dim = dims[k - 1];
    b.rank = std::min(b.n_k, b.dim);
    b.sigma = k <= m ? 0.0 : delta * std::exp2(m - k);
    auto [lo, hi] = dyadic_range(k);
    b.in_lo = lo;
    b.in_hi = std::min(hi, input_degree);
    b.out_hi = block_out_degree(k);
    if (b.n_k == 0 || b.dim == 0) {
      op.blocks.push_back(std::move(b));
      continue;
    }
    const MzBlockData data = mz_block_scalings(cache.rule(k), k, qu);
    // keep the n_k largest entries of V_k, ties by node index
    std::vector<Eigen::Index> order(b.u);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index c) { return data.V(a) > data.V(c); });
    b.keep.assign(b.u, 0);
    for (std::int64_t i = 0; i < b.n_k; ++i) b.keep[order[i]] = 1;

    // R^{-1} L S = 1 on kept nodes, 0 elsewhere
    Eigen::VectorXd scale(b.u);
    for (Eigen::Index i = 0; i < b.u; ++i)
      scale(i) = b.keep[i] ? data.V(i) * data.S(i) / data.R(i) : 0.0;

    const BallBasis basis(params, b.out_hi);
    const Eigen::MatrixXd Phi = basis.eval_matrix(data.rule.points(), b.out_hi);
    const auto c0 = basis.offset(b.in_lo);
    const auto c1 = basis.offset(b.in_hi + 1);
    const Eigen::VectorXd wk = data.rule.weights.cwiseProduct(scale);
    b.B = Phi.transpose() * (wk.asDiagonal() * Phi.middleCols(c0, c1 - c0));
    b.B.array().colwise() *= eta_diag(basis, b.out_hi, k).array();
    op.output_degree = std::max(op.output_degree, b.out_hi);
    op.blocks.push_back(std::move(b));
  }
  if (op.rank() > n) throw Error("assemble_near_optimal: rank audit failed");
  op.output_degree = std::max(op.output_degree, 0);
  return op;
}

RankNOperator assemble_near_optimal(const SpaceParams& params, std::int64_t n, double q,
                                    double delta, double epsilon, int input_degree,
                                    const NearOptimalOptions& opt) {
  MzBlockOptions bo = opt.block;
  bo.seed = opt.seed;
  BlockRuleCache cache(params, bo);
  return assemble_near_optimal(params, n, q, delta, epsilon, input_degree, cache, opt);
}

}  // namespace ballwidth
