#pragma once

#include "ballwidth/spectral.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace ballwidth {

using Point = Eigen::VectorXd;

// k is 1-based within the degree-n block, 1 <= k <= a_n^d.
struct BasisIndex {
  int n = 0;
  int k = 1;
  bool operator==(const BasisIndex&) const = default;
};

struct BasisOptions {
  // Relative perturbation of every normalization constant (fault injection only).
  double norm_perturbation = 0.0;
};

// Orthonormal basis of V_n^d in L_{2,mu} for d in {1,2,3}:
//   phi = c_{j,l} P_j^{(mu-1/2, l+(d-2)/2)}(2|x|^2-1) Y_l(x),  l = n - 2j,
// with Y_l a real solid harmonic orthonormal on the unit sphere.
// Within block n the order is j = 0,1,..., then harmonic order:
//   d=2: cos, sin;  d=3: m=0, then (m cos, m sin) for m = 1..l.
class BallBasis {
 public:
  BallBasis(const SpaceParams& params, int max_degree, BasisOptions opt = {});

  const SpaceParams& params() const { return params_; }
  int max_degree() const { return max_degree_; }
  std::int64_t size() const { return offsets_.back(); }
  std::int64_t size(int degree) const { return offsets_[degree + 1]; }
  std::int64_t offset(int n) const { return offsets_[n]; }
  std::int64_t flat(BasisIndex idx) const;
  BasisIndex index(std::int64_t flat) const;
  int degree_of(std::int64_t flat) const { return index(flat).n; }

  double eval(BasisIndex idx, const Point& x) const;
  // all phi_{nk}(x) for n <= degree, flat order; out must hold size(degree)
  void eval_all(const double* x, int degree, double* out) const;
  Eigen::VectorXd eval_all(const Point& x, int degree) const;
  // rows = points (columns of pts), cols = basis functions up to degree
  Eigen::MatrixXd eval_matrix(const Eigen::MatrixXd& pts, int degree) const;

 private:
  struct Entry {
    int j;
    int l;
    int h;  // harmonic slot within degree l
  };

  void harmonics(const double* x, int lmax, std::vector<double>& out) const;

  SpaceParams params_;
  int max_degree_;
  std::vector<std::int64_t> offsets_;
  std::vector<Entry> entries_;             // flat order
  std::vector<std::vector<double>> norm_;  // norm_[l][j]
  std::vector<int> harm_offset_;           // start of degree-l harmonics
};

}  // namespace ballwidth
