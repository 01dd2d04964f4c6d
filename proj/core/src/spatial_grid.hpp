#pragma once

// Uniform hash grid over lifted (unit-vector) points; private to the library.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ballwidth::detail {

class LiftGrid {
 public:
  LiftGrid(const Eigen::MatrixXd& pts, double cell) : pts_(pts), cell_(cell), dim_(pts.rows()) {
    std::vector<std::pair<std::uint64_t, int>> keyed(pts.cols());
    std::vector<long> c(dim_);
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      coords(pts.col(i).data(), c.data());
      keyed[i] = {key(c.data()), static_cast<int>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    order_.resize(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      order_[i] = keyed[i].second;
      auto& range = cells_[keyed[i].first];
      if (i == 0 || keyed[i].first != keyed[i - 1].first) range.first = static_cast<int>(i);
      range.second = static_cast<int>(i) + 1;
    }
  }

  std::int64_t size() const { return pts_.cols(); }

  // Calls f(index) for every stored point within Euclidean (chord) distance
  // `radius` of q, possibly plus a few more; callers check distances.
  template <class F>
  void visit(const double* q, double radius, F&& f) const {
    const long reach = static_cast<long>(std::ceil(radius / cell_));
    double cells = 1.0;
    for (int k = 0; k < dim_; ++k) cells *= 2.0 * reach + 1.0;
    if (cells > 0.25 * static_cast<double>(pts_.cols()) || cells > 1e6) {
      for (Eigen::Index i = 0; i < pts_.cols(); ++i) f(static_cast<int>(i));
      return;
    }
    std::vector<long> base(dim_), c(dim_);
    coords(q, base.data());
    std::vector<long> off(dim_, -reach);
    while (true) {
      for (int k = 0; k < dim_; ++k) c[k] = base[k] + off[k];
      auto it = cells_.find(key(c.data()));
      if (it != cells_.end())
        for (int s = it->second.first; s < it->second.second; ++s) f(order_[s]);
      int k = 0;
      while (k < dim_ && ++off[k] > reach) off[k++] = -reach;
      if (k == dim_) break;
    }
  }

 private:
  void coords(const double* x, long* c) const {
    for (int k = 0; k < dim_; ++k) c[k] = static_cast<long>(std::floor((x[k] + 1.0) / cell_));
  }
  std::uint64_t key(const long* c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int k = 0; k < dim_; ++k) {
      h ^= static_cast<std::uint64_t>(c[k] + (1l << 30));
      h *= 1099511628211ull;
    }
    return h;
  }

  const Eigen::MatrixXd& pts_;
  double cell_;
  int dim_;
  std::vector<int> order_;
  std::unordered_map<std::uint64_t, std::pair<int, int>> cells_;
};

}  // namespace ballwidth::detail
