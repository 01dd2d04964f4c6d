#pragma once

#include "ballwidth/ball_basis.hpp"
#include "ballwidth/spectral.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ballwidth {

// Block-indexed coefficients f_hat_{nk}, n = 0..max_degree, stored flat in the
// same order as BallBasis.
class CoeffVector {
 public:
  CoeffVector() = default;
  CoeffVector(const SpaceParams& params, int max_degree);
  CoeffVector(const SpaceParams& params, int max_degree, Eigen::VectorXd data);

  const SpaceParams& params() const { return params_; }
  int max_degree() const { return max_degree_; }
  std::int64_t size() const { return data_.size(); }
  std::int64_t offset(int n) const { return offsets_[n]; }
  std::int64_t block_size(int n) const { return offsets_[n + 1] - offsets_[n]; }

  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }
  auto block(int n) { return data_.segment(offsets_[n], block_size(n)); }
  auto block(int n) const { return data_.segment(offsets_[n], block_size(n)); }

  double& at(BasisIndex idx);
  double at(BasisIndex idx) const;

  // truncated or zero-padded copy
  CoeffVector resized(int max_degree) const;
  double norm() const { return data_.norm(); }
  // highest degree with a nonzero entry, -1 for the zero vector
  int effective_degree() const;

  CoeffVector& operator+=(const CoeffVector& o);
  CoeffVector& operator-=(const CoeffVector& o);
  CoeffVector& operator*=(double a);

 private:
  std::int64_t check_index(BasisIndex idx) const;

  SpaceParams params_;
  int max_degree_ = -1;
  std::vector<std::int64_t> offsets_;
  Eigen::VectorXd data_;
};

CoeffVector operator+(CoeffVector a, const CoeffVector& b);
CoeffVector operator-(CoeffVector a, const CoeffVector& b);
CoeffVector operator*(double s, CoeffVector a);

}  // namespace ballwidth
