#pragma once

#include "ballwidth/ball_basis.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace ballwidth {

// arccos((x,y) + sqrt(1-|x|^2) sqrt(1-|y|^2)): geodesic distance of the
// hemisphere lifts (x, sqrt(1-|x|^2)).
double rho_tilde(const Point& x, const Point& y);
double rho_tilde(const double* x, const double* y, int d);

// columns of a (d+1) x P matrix of lifted points -> d x P ball points
Eigen::MatrixXd lift(const Eigen::MatrixXd& pts);
Eigen::MatrixXd project(const Eigen::MatrixXd& lifted);

// Shifted low-discrepancy points on the upper hemisphere of S^d, uniform in
// surface measure; (d+1) x count.
Eigen::MatrixXd hemisphere_sequence(int d, std::int64_t count, std::uint64_t seed);

struct SeparatedSet {
  int d = 1;
  Eigen::MatrixXd points;  // d x P, farthest-point insertion order
  double epsilon = 0.0;
  double separation = 0.0;  // measured min pairwise rho_tilde
  double covering = 0.0;    // measured against the audit grid
  std::uint64_t seed = 0;
  std::int64_t pool_size = 0;
  std::int64_t audit_size = 0;
  std::int64_t repairs = 0;  // audit points inserted after the pool pass

  std::int64_t size() const { return points.cols(); }
};

struct SeparatedOptions {
  double pool_factor = 100.0;       // pool size relative to the expected cardinality
  std::int64_t audit_base = 10000;  // audit grid has audit_base * 2^d points
  double max_repair_fraction = 0.05;
};

// Expected cardinality of a maximal epsilon-separated set, used to size pools.
double expected_cardinality(int d, double epsilon);

SeparatedSet build_separated(int d, double epsilon, std::uint64_t seed,
                             const SeparatedOptions& opt = {});

double measure_separation(const Eigen::MatrixXd& pts);
double measure_covering(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& audit_pts);

// Index of the nearest column of pts for every column of queries (rho_tilde).
Eigen::VectorXi nearest_points(const Eigen::MatrixXd& pts, const Eigen::MatrixXd& queries,
                               Eigen::VectorXd* dist = nullptr);

}  // namespace ballwidth
