#include "selftest.hpp"

#include "ballwidth/ball_basis.hpp"
#include "ballwidth/cubature.hpp"
#include "ballwidth/gaussian.hpp"
#include "ballwidth/kernels.hpp"
#include "ballwidth/lq_norm.hpp"
#include "ballwidth/operators.hpp"
#include "ballwidth/parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>

namespace ballwidth::experiment {

namespace {

Point uniform_ball(int d, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point x(d);
  do {
    for (int i = 0; i < d; ++i) x(i) = u(eng);
  } while (x.squaredNorm() >= 1.0);
  return x;
}

CoeffVector random_poly(const SpaceParams& p, int N, std::mt19937_64& eng) {
  std::normal_distribution<double> g;
  CoeffVector c(p, N);
  for (auto& v : c.data()) v = g(eng);
  return c;
}

double kernel_agreement(const SelftestOptions& opt) {
  std::mt19937_64 eng(opt.seed);
  double worst = 0.0;
  for (int d : {1, 2}) {
    for (double mu : {0.5, 1.0}) {
      const SpaceParams p{d, mu, 2.0, 2.5};
      const BallBasis basis(p, 6, {opt.norm_perturbation});
      const KernelSpec spec = make_kernel_spec(p, 6);
      for (int i = 0; i < 20; ++i) {
        const Point x = uniform_ball(d, eng), y = uniform_ball(d, eng);
        for (int n = 0; n <= 6; ++n) {
          const double a = kernel_sum(basis, n, x, y), b = kernel_compact(spec, n, x, y);
          const double xx = kernel_compact(spec, n, x, x), yy = kernel_compact(spec, n, y, y);
          worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), std::sqrt(xx * yy)));
        }
      }
    }
  }
  return worst;
}

double orthonormality(const SelftestOptions& opt) {
  double worst = 0.0;
  for (int d : {1, 2}) {
    for (double mu : {0.5, 2.0}) {
      const SpaceParams p{d, mu, 2.0, 2.5};
      const BallBasis basis(p, 8, {opt.norm_perturbation});
      const CubatureRule rule = product_rule(p, 16);
      const Eigen::MatrixXd phi = basis.eval_matrix(rule.points(), 8);
      const Eigen::MatrixXd G = phi.transpose() * rule.weights.asDiagonal() * phi;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(G.rows(), G.cols());
      worst = std::max(worst, (G - I).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double reproduction(const SelftestOptions& opt) {
  std::mt19937_64 eng(opt.seed + 1);
  double worst = 0.0;
  for (int d : {1, 2}) {
    const SpaceParams p{d, 1.0, 2.0, 2.5};
    const CoeffVector c = random_poly(p, 6, eng);
    const CubatureRule rule = product_rule(p, 12);
    const CoeffVector back = analyze_values(synth(c, rule.points()), p, 6, rule);
    worst = std::max(worst, (back - c).norm() / c.norm());
  }
  return worst;
}

double parseval(const SelftestOptions& opt) {
  std::mt19937_64 eng(opt.seed + 2);
  double worst = 0.0;
  for (int d : {1, 2}) {
    const SpaceParams p{d, 0.5, 2.0, 2.5};
    const CoeffVector c = random_poly(p, 6, eng);
    const CubatureRule rule = product_rule(p, 12);
    const Eigen::VectorXd v = synth(c, rule.points());
    const double quad = std::sqrt((rule.weights.array() * v.array().square()).sum());
    worst = std::max(worst, std::abs(LqNorm(p, 6, 2.0)(c) - quad) / quad);
  }
  return worst;
}

// largest |sample variance - lambda_n^{-rho}| in units of its standard error
double covariance_law(const SelftestOptions& opt) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const int N = 8;
  const std::int64_t M = 4000;
  const GaussianSampler sampler(p, N);
  CoeffVector sum2(p, N);
  for (std::int64_t i = 0; i < M; ++i) {
    auto eng = draw_engine(opt.seed + 3, static_cast<std::uint64_t>(i));
    const CoeffVector f = sampler.sample(eng).resized(N);
    sum2.data() += f.data().cwiseAbs2();
  }
  double worst = 0.0;
  for (int n = 1; n <= N; ++n) {
    const double var = std::pow(n * (n + 2.0 * p.mu), -p.rho());
    for (std::int64_t k = 0; k < sum2.block_size(n); ++k) {
      const double v = sum2.block(n)(k) / M;
      worst = std::max(worst, std::abs(v - var) / (var * std::sqrt(2.0 / M)));
    }
  }
  return worst;
}

}  // namespace

bool SelftestReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

SelftestReport run_selftest(const SelftestOptions& opt) {
  struct Spec {
    const char* name;
    double tol;
    std::function<double(const SelftestOptions&)> f;
  };
  const Spec specs[] = {{"kernel_agreement", 1e-8, kernel_agreement},
                        {"orthonormality", 1e-10, orthonormality},
                        {"reproduction", 1e-10, reproduction},
                        {"parseval", 1e-10, parseval},
                        {"covariance_law", 5.0, covariance_law}};
  SelftestReport r;
  for (const auto& s : specs) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult c{s.name, false, std::nan(""), s.tol, 0.0};
    try {
      c.value = s.f(opt);
      c.pass = c.value <= s.tol;
    } catch (const std::exception&) {
      c.pass = false;
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(c);
  }
  return r;
}

std::string selftest_json(const SelftestReport& r, const SelftestOptions& opt,
                          const std::string& hash) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json("nan")},
                      {"tolerance", c.tolerance},
                      {"seconds", c.seconds}});
  }
  const nlohmann::json j{{"pass", r.pass()},
                         {"checks", checks},
                         {"norm_perturbation", opt.norm_perturbation},
                         {"seed", opt.seed},
                         {"manifest_hash", hash}};
  return j.dump(1) + "\n";
}

}  // namespace ballwidth::experiment
