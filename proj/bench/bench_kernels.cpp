// Serial reference kernels against their OpenMP versions.
//   ./bench_kernels --benchmark_filter=nearest

#include <benchmark/benchmark.h>

#include "pcsim/degrade.hpp"
#include "pcsim/metrics.hpp"
#include "pcsim/neighbor_index.hpp"
#include "pcsim/sampling.hpp"
#include "pcsim/transport.hpp"

using namespace pcsim;

namespace {

PointCloud sample(std::size_t n, std::uint64_t seed) {
  return synth_shapes(ShapeKind::torus, n, seed).cloud;
}

Exec mode(const benchmark::State &state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void BM_NearestPass(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sample(n, 1);
  const auto index = build_index(sample(n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_pass(a, index, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_Fps(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cloud = sample(4 * n, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fps_indices(cloud, n, 0, mode(state)));
  }
}

void BM_Chamfer(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sample(n, 4);
  const auto b = sample(n, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chamfer(a, b, ChamferVariant::T, mode(state)).value);
  }
}

void BM_Dcd(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sample(n, 6);
  const auto b = sample(n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dcd(a, b, {}, mode(state)).value);
  }
}

void BM_CostMatrix(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sample(n, 8);
  const auto b = sample(n, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cost_matrix(a, b, mode(state)));
  }
}

void BM_Auction(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sample(n, 10);
  const auto b = sample(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(emd_approx(a, b, 0.004, 3000, mode(state)).total_cost);
  }
}

void sizes(benchmark::internal::Benchmark *b) {
  for (int n : {512, 2048, 8192}) {
    for (int par : {0, 1}) {
      b->Args({n, par});
    }
  }
  b->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
}

void small_sizes(benchmark::internal::Benchmark *b) {
  for (int n : {256, 1024}) {
    for (int par : {0, 1}) {
      b->Args({n, par});
    }
  }
  b->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);
}

} // namespace

BENCHMARK(BM_NearestPass)->Apply(sizes);
BENCHMARK(BM_Fps)->Apply(sizes);
BENCHMARK(BM_Chamfer)->Apply(sizes);
BENCHMARK(BM_Dcd)->Apply(sizes);
BENCHMARK(BM_CostMatrix)->Apply(small_sizes);
BENCHMARK(BM_Auction)->Apply(small_sizes);

BENCHMARK_MAIN();
