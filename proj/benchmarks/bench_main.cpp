#include <benchmark/benchmark.h>

#include "ballwidth/ball_basis.hpp"
#include "ballwidth/cubature.hpp"
#include "ballwidth/diagonal.hpp"
#include "ballwidth/gaussian.hpp"
#include "ballwidth/kernels.hpp"
#include "ballwidth/lq_norm.hpp"
#include "ballwidth/near_optimal.hpp"
#include "ballwidth/parallel.hpp"
#include "ballwidth/spectral.hpp"

#include <limits>
#include <random>
#include <vector>

using namespace ballwidth;

static void BM_JacobiAll(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> out(n + 1);
  double t = 0.3;
  for (auto _ : state) {
    jacobi_all(1.5, 0.5, n, t, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * (n + 1));
}
BENCHMARK(BM_JacobiAll)->Arg(64)->Arg(512)->Arg(4096);

static void BM_GaussJacobi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_jacobi(0.5, -0.5, n));
}
BENCHMARK(BM_GaussJacobi)->Arg(32)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_BasisEvalAll(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0)), N = static_cast<int>(state.range(1));
  const BallBasis basis({d, 1.0, 2.0, 3.0}, N);
  Point x = Point::Constant(d, 0.3);
  Eigen::VectorXd out(basis.size(N));
  for (auto _ : state) {
    basis.eval_all(x.data(), N, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * out.size());
}
BENCHMARK(BM_BasisEvalAll)->Args({1, 256})->Args({2, 32})->Args({2, 64})->Args({3, 16});

static void BM_KernelCompact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpaceParams p{2, 1.0, 2.0, 3.0};
  const KernelSpec spec = make_kernel_spec(p, n);
  Point x(2), y(2);
  x << 0.2, -0.4;
  y << 0.5, 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(kernel_compact(spec, n, x, y));
}
BENCHMARK(BM_KernelCompact)->Arg(10)->Arg(100);

static void BM_LemmaRule(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(lemma_rule({d, 0.5, 2.0, 3.0}, n));
}
BENCHMARK(BM_LemmaRule)->Args({1, 8})->Args({2, 4})->Unit(benchmark::kMillisecond);

static void BM_GaussianSample(benchmark::State& state) {
  const GaussianSampler sampler({1, 0.5, 2.0, 2.0}, static_cast<int>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto eng = draw_engine(1, i++);
    benchmark::DoNotOptimize(sampler.sample(eng));
  }
}
BENCHMARK(BM_GaussianSample)->Arg(256)->Arg(4096);

static void BM_LqNorm(benchmark::State& state) {
  const double q = state.range(0) == 0 ? std::numeric_limits<double>::infinity() : double(state.range(0));
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  const int N = 128;
  const LqNorm norm(p, N, q);
  std::mt19937_64 eng(3);
  std::normal_distribution<double> g;
  CoeffVector c(p, N);
  for (auto& v : c.data()) v = g(eng);
  benchmark::DoNotOptimize(norm(c));  // warm the cached levels
  for (auto _ : state) benchmark::DoNotOptimize(norm(c));
}
BENCHMARK(BM_LqNorm)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMicrosecond);

static void BM_DiagErrors(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto D = DiagonalOperator::identity(m);
  for (auto _ : state) benchmark::DoNotOptimize(diag_errors(D, m / 4, 4.0, 1000, 7));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_DiagErrors)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_AssembleNearOptimal(benchmark::State& state) {
  const SpaceParams p{1, 0.5, 2.0, 2.0};
  BlockRuleCache cache(p);
  const auto n = state.range(0);
  assemble_near_optimal(p, n, 2.0, 0.1, 2.0, 256, cache);  // block rules built once
  for (auto _ : state) benchmark::DoNotOptimize(assemble_near_optimal(p, n, 2.0, 0.1, 2.0, 256, cache));
}
BENCHMARK(BM_AssembleNearOptimal)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
