#pragma once

#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/cubature.hpp"
#include "ballwidth/errors.hpp"
#include "ballwidth/operators.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ballwidth {

// U_k: samples of f at the block nodes
Eigen::VectorXd sample_block(const MzBlockData& block, const CoeffVector& f);
// T_k a = sum_i a_i w_i L_{2^k,eta}(., xi_i), returned in coefficient space
CoeffVector synthesize_block(const MzBlockData& block, const SpaceParams& params,
                             const Eigen::VectorXd& a);
// spectral norm of G_ij = w_i^{1/2} w_j^{1/2} M_k(xi_i, xi_j)
double frame_bound(const MzBlockData& block, const SpaceParams& params);
// max over random a of ||T_k a||_{q,mu} / ||a||_{l_{q,w}}
double synthesis_norm_estimate(const MzBlockData& block, const SpaceParams& params, double q,
                               int trials, std::uint64_t seed);

// raised by a frozen BlockRuleCache for a block it does not hold
struct MissingBlockRule : Error {
  int k;
  explicit MissingBlockRule(int k_)
      : Error("block rule " + std::to_string(k_) + " is not available"), k(k_) {}
};

// Thread-safe cache of block rules; rules do not depend on q or the budget n.
class BlockRuleCache {
 public:
  BlockRuleCache(const SpaceParams& params, MzBlockOptions opt = {});
  const CubatureRule& rule(int k);
  // use a prebuilt rule for block k; throws if its params or degree do not fit
  void insert(int k, CubatureRule rule);
  // exactness degree a block-k rule must reach
  int required_degree(int k) const;
  // stop building rules on demand; rule(k) then throws MissingBlockRule for absent k
  void freeze() { frozen_ = true; }
  const SpaceParams& params() const { return params_; }

 private:
  SpaceParams params_;
  MzBlockOptions opt_;
  std::mutex mtx_;
  std::map<int, std::unique_ptr<CubatureRule>> rules_;
  bool frozen_ = false;
};

struct NearOptimalOptions {
  double C1 = 0.0;  // 0: smallest feasible constant (largest m within budget)
  std::uint64_t seed = 1;
  MzBlockOptions block;
};

struct BlockComponent {
  int k = 0;
  std::int64_t u = 0;       // block nodes
  std::int64_t n_k = 0;     // kept nodes after truncation
  std::int64_t dim = 0;     // dimension of the delta_k range
  std::int64_t rank = 0;    // min(n_k, dim)
  double sigma = 0.0;       // failure budget
  int in_lo = 0, in_hi = 0; // input degree range
  int out_hi = 0;           // output degree bound 2^{k+1}-1
  std::vector<char> keep;
  Eigen::MatrixXd B;        // coefficient-space block map, out x in
};

// T~_n f = sum_k T_k R_k^{-1} L_k S_k U_k delta_k f
class RankNOperator : public CoeffOperator {
 public:
  CoeffVector apply(const CoeffVector& c) const override;
  std::int64_t rank() const override;
  std::string name() const override { return "near-optimal"; }

  std::int64_t budget = 0;
  double q = 2.0;       // requested integrability
  double q_used = 2.0;  // q < 2 reuses the q = 2 operator
  double delta = 0.1;
  double epsilon = 0.1;
  double C1 = 0.0;      // n / 2^{md} for the selected m
  int m = 0;
  int input_degree = 0;
  int output_degree = 0;
  SpaceParams params;
  std::vector<BlockComponent> blocks;
};

// per-block node budgets for a candidate m (before the rank cap)
std::vector<std::int64_t> block_schedule(const std::vector<std::int64_t>& u, int m, int d,
                                         double epsilon);
// dimension of the range of delta_k
std::int64_t dyadic_dim(int d, int k, int N);

RankNOperator assemble_near_optimal(const SpaceParams& params, std::int64_t n, double q,
                                    double delta, double epsilon, int input_degree,
                                    BlockRuleCache& cache, const NearOptimalOptions& opt = {});
RankNOperator assemble_near_optimal(const SpaceParams& params, std::int64_t n, double q,
                                    double delta, double epsilon, int input_degree,
                                    const NearOptimalOptions& opt = {});

}  // namespace ballwidth
