#pragma once

#include <cstdint>
#include <vector>

namespace ballwidth {

struct SpaceParams {
  int d = 1;
  double mu = 0.5;
  double r = 2.0;
  double s = 2.0;

  double rho() const { return r + 0.5 * s; }
  // Index of the Gegenbauer family in the compact kernel.
  double lambda() const { return mu + 0.5 * (d - 1); }

  bool operator==(const SpaceParams&) const = default;

  // Throws DomainError on d < 1, mu < 0, r <= 0 or s <= d.
  void validate() const;
  // Embedding and rate hypotheses for a target integrability q (q = inf allowed).
  bool admissible_for(double q) const;
  void validate_for(double q) const;
};

double eigenvalue(const SpaceParams& p, int n);

std::int64_t block_dim(int d, int n);
inline std::int64_t block_dim(const SpaceParams& p, int n) { return block_dim(p.d, n); }
// dim of polynomials of total degree <= n in d variables
std::int64_t poly_dim(int d, int n);

// b_d^gamma = 1 / int_{B^d} (1-|x|^2)^(gamma-1/2) dx, closed form.
double weight_norm_const(int d, double gamma);
// Same quantity by adaptive integration; used as a construction-time cross-check.
double weight_norm_const_numeric(int d, double gamma);
// 1 / int_{-1}^{1} (1-u^2)^(mu-1) du for mu > 0.
double u_weight_norm(double mu);

double gegenbauer(double lambda, int n, double t);
// (n + lambda)/lambda * C_n^lambda(t), with the lambda -> 0 limit 2 T_n(t) (n >= 1).
double gegenbauer_normalized(double lambda, int n, double t);
// out[j] = gegenbauer_normalized(lambda, j, t) for j = 0..n
void gegenbauer_normalized_all(double lambda, int n, double t, double* out);

double jacobi(double alpha, double beta, int n, double t);
// out[j] = P_j^{(alpha,beta)}(t), j = 0..n
void jacobi_all(double alpha, double beta, int n, double t, double* out);
// Squared L2 norm of P_n^{(alpha,beta)} against (1-t)^alpha (1+t)^beta, closed form.
double jacobi_norm_sq(double alpha, double beta, int n);

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha = 0.0;
  double beta = 0.0;
  int exact_degree = -1;
  double residual = 0.0;  // max relative moment residual from certification

  std::size_t size() const { return nodes.size(); }
};

// N-point Gauss-Jacobi rule, exact to degree 2N-1, certified against
// orthonormal Jacobi moments (relative residual <= 1e-12).
QuadratureRule1D gauss_jacobi(double alpha, double beta, int N);

}  // namespace ballwidth
