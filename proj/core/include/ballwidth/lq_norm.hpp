#pragma once

#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/cubature.hpp"

#include <Eigen/Core>

#include <memory>
#include <mutex>
#include <vector>

namespace ballwidth {

struct LqOptions {
  double refine_tolerance = 0.01;   // non-even finite q: doubling estimate
  double sup_tolerance = 0.005;     // q = inf: max stable under grid doubling
  int sup_base_factor = 32;         // initial sup grid ~ factor * N points per direction
  int max_levels = 6;
  std::int64_t max_cached_entries = 40'000'000;  // cached basis matrix size cap
};

// ||e||_{q,mu} for coefficient vectors of degree <= N. q = 2 uses Parseval,
// even integer q a Gauss product rule of degree qN, other finite q doubling
// refinement, q = inf a nested grid with a boundary ring, doubled until stable.
class LqNorm {
 public:
  LqNorm(const SpaceParams& params, int N, double q, LqOptions opt = {});

  double operator()(const CoeffVector& e) const;
  double q() const { return q_; }
  int degree() const { return N_; }

 private:
  struct Level {
    Eigen::MatrixXd pts;  // d x P
    Eigen::VectorXd w;    // empty for sup grids
    Eigen::MatrixXd phi;  // P x dim, empty when above the cache cap
  };
  const Level& level(int i) const;
  Level make_level(int i) const;
  Eigen::VectorXd values(const Level& L, const Eigen::VectorXd& c) const;
  double level_norm(const Level& L, const Eigen::VectorXd& c) const;

  SpaceParams params_;
  int N_;
  double q_;
  LqOptions opt_;
  std::shared_ptr<const BallBasis> basis_;
  mutable std::mutex mtx_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

double lq_error(const CoeffVector& f, const CoeffVector& g, double q, const SpaceParams& params);

// grid of the closed ball used for sup norms: d=1 cosine-spaced with endpoints,
// d>=2 cosine-spaced radii (including the boundary ring) times angular grids
Eigen::MatrixXd sup_grid(int d, int K);

}  // namespace ballwidth
