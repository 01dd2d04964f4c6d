#include "ballwidth/errors.hpp"
#include "ballwidth/points.hpp"
#include "spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace ballwidth {

namespace {

constexpr double kPi = std::numbers::pi;

double chord_of(double angle) { return 2.0 * std::sin(0.5 * std::min(angle, kPi)); }

double hemisphere_area(int d) {
  return std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

double unit_ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

// Lazy farthest-point insertion over candidate columns of `cand`. best[i] holds
// the largest dot product with any chosen center (i.e. the nearest one).
// Inserts candidates until every candidate lies within angle eps.
std::int64_t farthest_point_pass(const Eigen::MatrixXd& cand, const detail::LiftGrid& grid,
                                 std::vector<double>& best, double eps,
                                 std::vector<Eigen::VectorXd>& centers) {
  using Item = std::pair<double, int>;  // (dot, index), smallest dot first
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int i = 0; i < static_cast<int>(best.size()); ++i) heap.push({best[i], i});
  const double cos_eps = std::cos(eps);
  std::int64_t added = 0;
  while (!heap.empty()) {
    const auto [val, i] = heap.top();
    heap.pop();
    if (val != best[i]) continue;
    if (val >= cos_eps) break;
    const double reach = chord_of(std::acos(std::clamp(val, -1.0, 1.0)));
    centers.emplace_back(cand.col(i));
    ++added;
    const Eigen::VectorXd c = cand.col(i);
    grid.visit(c.data(), reach, [&](int j) {
      const double v = cand.col(j).dot(c);
      if (v > best[j]) {
        best[j] = v;
        heap.push({v, j});
      }
    });
  }
  return added;
}

Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& cols, int rows) {
  Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(i) = cols[i];
  return out;
}

// nearest lifted column of `pts` for a lifted query; returns the dot product
double nearest_dot(const Eigen::MatrixXd& pts, const detail::LiftGrid& grid, const double* q,
                   double start_radius, int exclude, int* arg) {
  double radius = start_radius;
  Eigen::Map<const Eigen::VectorXd> qv(q, pts.rows());
  while (true) {
    double best = -2.0;
    int who = -1;
    grid.visit(q, radius, [&](int j) {
      if (j == exclude) return;
      const double v = pts.col(j).dot(qv);
      if (v > best) {
        best = v;
        who = j;
      }
    });
    const double ch = who < 0 ? 3.0 : std::sqrt(std::max(0.0, 2.0 - 2.0 * best));
    if (who >= 0 && (ch <= radius || radius >= 2.0)) {
      if (arg) *arg = who;
      return best;
    }
    if (radius >= 2.0) {
      if (arg) *arg = -1;
      return -2.0;
    }
    radius = std::min(2.0, 2.0 * radius);
  }
}

double typical_spacing(int d, std::int64_t count) {
  return std::pow(hemisphere_area(d) / std::max<std::int64_t>(count, 1), 1.0 / d);
}

}  // namespace

double expected_cardinality(int d, double epsilon) {
  return 2.0 * hemisphere_area(d) / (unit_ball_volume(d) * std::pow(epsilon, d));
}

SeparatedSet build_separated(int d, double epsilon, std::uint64_t seed,
                             const SeparatedOptions& opt) {
  if (d < 1) throw DomainError("build_separated: d must be >= 1");
  if (!(epsilon > 0.0 && epsilon < kPi / 2)) {
    std::ostringstream msg;
    msg << "build_separated: epsilon must lie in (0, pi/2), got " << epsilon;
    throw DomainError(msg.str());
  }
  const auto expected = expected_cardinality(d, epsilon);
  const std::int64_t audit_n = opt.audit_base << d;
  // small sets: the pool is never coarser than the audit grid
  const auto pool_n = std::max(static_cast<std::int64_t>(std::ceil(opt.pool_factor * expected)),
                               audit_n);
  const Eigen::MatrixXd pool = hemisphere_sequence(d, pool_n, seed);
  const double cell = chord_of(epsilon);
  detail::LiftGrid pool_grid(pool, cell);

  std::vector<Eigen::VectorXd> centers;
  std::vector<double> best(pool_n, -2.0);
  {
    // first center: the pool point nearest the pole (the ball's center)
    Eigen::Index first = 0;
    pool.row(d).maxCoeff(&first);
    const Eigen::VectorXd c = pool.col(first);
    centers.push_back(c);
    for (std::int64_t j = 0; j < pool_n; ++j) best[j] = pool.col(j).dot(c);
  }
  farthest_point_pass(pool, pool_grid, best, epsilon, centers);
  const std::int64_t from_pool = static_cast<std::int64_t>(centers.size());

  // audit grid: distinct shifted sequence
  const Eigen::MatrixXd audit = hemisphere_sequence(d, audit_n, seed ^ 0x9e3779b97f4a7c15ull);
  Eigen::MatrixXd cmat = stack(centers, d + 1);
  {
    detail::LiftGrid cgrid(cmat, cell);
    std::vector<double> abest(audit_n);
    for (std::int64_t j = 0; j < audit_n; ++j)
      abest[j] = nearest_dot(cmat, cgrid, audit.col(j).data(), cell, -1, nullptr);
    detail::LiftGrid agrid(audit, cell);
    farthest_point_pass(audit, agrid, abest, epsilon, centers);
  }
  const std::int64_t repairs = static_cast<std::int64_t>(centers.size()) - from_pool;
  if (repairs > opt.max_repair_fraction * static_cast<double>(centers.size())) {
    std::ostringstream msg;
    msg << "build_separated: candidate pool too coarse (" << repairs
        << " audit repairs for " << centers.size() << " points); increase pool_factor";
    throw InfeasibleError(msg.str());
  }
  cmat = stack(centers, d + 1);

  SeparatedSet set;
  set.d = d;
  set.points = project(cmat);
  set.epsilon = epsilon;
  set.seed = seed;
  set.pool_size = pool_n;
  set.audit_size = audit_n;
  set.repairs = repairs;
  set.separation = measure_separation(set.points);
  set.covering = measure_covering(set.points, project(audit));
  if (set.separation < epsilon || set.covering > epsilon) {
    std::ostringstream msg;
    msg << "build_separated: audit failed (separation " << set.separation << ", covering "
        << set.covering << ", epsilon " << epsilon << ")";
    throw CertificationError(msg.str());
  }
  return set;
}

double measure_separation(const Eigen::MatrixXd& pts) {
  if (pts.cols() < 2) return std::numeric_limits<double>::infinity();
  const int d = static_cast<int>(pts.rows());
  const Eigen::MatrixXd L = lift(pts);
  const double cell = typical_spacing(d, pts.cols());
  detail::LiftGrid grid(L, cell);
  double min_angle = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < L.cols(); ++i) {
    const double v = nearest_dot(L, grid, L.col(i).data(), cell, static_cast<int>(i), nullptr);
    min_angle = std::min(min_angle, std::acos(std::clamp(v, -1.0, 1.0)));
  }
  return min_angle;
}

double measure_covering(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& audit_pts) {
  Eigen::VectorXd dist;
  nearest_points(pts, audit_pts, &dist);
  return dist.size() ? dist.maxCoeff() : 0.0;
}

Eigen::VectorXi nearest_points(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& queries,
                               Eigen::VectorXd* dist) {
  const int d = static_cast<int>(pts.rows());
  const Eigen::MatrixXd L = lift(pts), Q = lift(queries);
  const double cell = typical_spacing(d, pts.cols());
  detail::LiftGrid grid(L, cell);
  Eigen::VectorXi idx(Q.cols());
  if (dist) dist->resize(Q.cols());
  for (Eigen::Index i = 0; i < Q.cols(); ++i) {
    int who = -1;
    const double v = nearest_dot(L, grid, Q.col(i).data(), cell, -1, &who);
    idx(i) = who;
    if (dist) (*dist)(i) = std::acos(std::clamp(v, -1.0, 1.0));
  }
  return idx;
}

}  // namespace ballwidth
