#include <benchmark/benchmark.h>

#include <random>

#include "hotv/linsys.hpp"
#include "hotv/operators.hpp"
#include "hotv/signals.hpp"
#include "hotv/solver.hpp"

using namespace hotv;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

void BM_PAForward2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const PATransform t(k, Grid2D{n, n});
  const auto f = noise(n * n);
  std::vector<double> out(t.output_size());
  for (auto _ : state) {
    t.apply(f, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_PAForward2D)->ArgsProduct({{64, 256}, {1, 4}});

void BM_PAAdjoint2D(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PATransform t(3, Grid2D{n, n});
  const auto g = noise(t.output_size());
  std::vector<double> out(n * n);
  for (auto _ : state) {
    t.apply_adjoint(g, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PAAdjoint2D)->Arg(64)->Arg(256);

void BM_SparseApply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_sampling_operator(n / 2, n, 0.1, 3);
  const auto x = noise(n);
  std::vector<double> y(n / 2), z(n);
  for (auto _ : state) {
    a.apply(x, y);
    a.apply_adjoint(y, z);
    benchmark::DoNotOptimize(z.data());
  }
  state.counters["nnz"] = static_cast<double>(a.nnz());
}
BENCHMARK(BM_SparseApply)->Arg(256)->Arg(4096);

void BM_Admm1D(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto sig = random_piecewise_polynomial(256, 5);
  const auto a = random_sampling_operator(160, 256, 0.1, 5);
  const auto b = add_noise(a.apply(sig.samples), NoiseSpec::with_sigma(0.5, 5));
  const auto sys = normalize_system(a, b.data);
  SolverConfig cfg;
  cfg.order = k;
  cfg.lambda = 20.0;
  for (auto _ : state) {
    auto r = hotv_reconstruct(sys, Grid1D{256}, cfg);
    benchmark::DoNotOptimize(r.f.data());
  }
}
BENCHMARK(BM_Admm1D)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
