#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "qprecode/channel.hpp"
#include "qprecode/ils.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/rng.hpp"
#include "qprecode/schemes.hpp"
#include "qprecode/types.hpp"
#include "qprecode/wmmse.hpp"

using namespace qprecode;

namespace {

MatC iid_channel(std::mt19937_64& rng, int K, int M) {
  MatC H(K, M);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) H(k, m) = cnormal(rng);
  }
  return H;
}

std::vector<IlsInstance> instance_pool(int M, int L, int count) {
  std::mt19937_64 rng(1);
  const int K = 4;
  const QuantCodebook cb = build_codebook(L, optimal_step_size(L, 1.0 / (2.0 * K * M)));
  std::vector<IlsInstance> pool;
  pool.reserve(count);
  while (static_cast<int>(pool.size()) < count) {
    const MatC H = iid_channel(rng, K, M);
    const MatC P0 = wf_init(H, 10.0, 1.0).entries;
    VecC beta(K);
    VecR d(K);
    for (int k = 0; k < K; ++k) {
      beta(k) = receiver_gain(H, P0, 1.0, k);
      d(k) = ue_weight(H, P0, 1.0, k);
    }
    const EffectiveWeights ew = effective_weights(beta, d);
    pool.push_back(build_per_ue_instance(H, ew, 0.05, 0, cb));
  }
  return pool;
}

void BM_SphereDecoder(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int L = static_cast<int>(state.range(1));
  const std::vector<IlsInstance> pool = instance_pool(M, L, 16);
  std::size_t i = 0;
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const IlsSolution sol = sesd_solve(pool[i++ % pool.size()], 1'000'000);
    nodes += sol.nodes_visited;
    benchmark::DoNotOptimize(sol.residual);
  }
  state.counters["nodes/solve"] =
      benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SphereDecoder)->Args({4, 4})->Args({8, 4})->Args({8, 8})->Unit(benchmark::kMicrosecond);

void BM_QuantizedSubproblem(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int K = 4;
  const int L = static_cast<int>(state.range(1));
  std::mt19937_64 rng(2);
  const double q = 100.0;
  const QuantCodebook cb = build_codebook(L, optimal_step_size(L, q / (2.0 * K * M)));
  SdOptions sd;
  sd.node_budget = 20000;
  struct Input {
    MatC H;
    VecC beta;
    VecR d;
  };
  std::vector<Input> pool(8);
  for (auto& in : pool) {
    in.H = iid_channel(rng, K, M);
    const MatC P0 = wf_init(in.H, q, 1.0).entries;
    in.beta.resize(K);
    in.d.resize(K);
    for (int k = 0; k < K; ++k) {
      in.beta(k) = receiver_gain(in.H, P0, 1.0, k);
      in.d(k) = ue_weight(in.H, P0, 1.0, k);
    }
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const Input& in = pool[i++ % pool.size()];
    benchmark::DoNotOptimize(solve_quantized_subproblem(in.H, in.beta, in.d, q, cb, sd));
  }
}
BENCHMARK(BM_QuantizedSubproblem)->Args({8, 8})->Args({16, 8})->Unit(benchmark::kMillisecond);

void BM_SampleChannel(benchmark::State& state) {
  ArrayGeometry geom;
  geom.m_h = 4;
  geom.m_v = 4;
  const double asd = 10.0 * std::numbers::pi / 180.0;
  auto rng = derive_stream(3, 0);
  for (auto _ : state) {
    const UeDrop drop = random_drop(rng, 4);
    benchmark::DoNotOptimize(sample_channel(rng, drop, 5.0, geom, asd));
  }
}
BENCHMARK(BM_SampleChannel)->Unit(benchmark::kMicrosecond);

void BM_ScaledSumRate(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const MatC H = iid_channel(rng, 4, 16);
  const MatC P = iid_channel(rng, 16, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scaled_sum_rate(H, P, 1.0, 100.0));
  }
}
BENCHMARK(BM_ScaledSumRate)->Unit(benchmark::kMicrosecond);

void BM_SchemeRun(benchmark::State& state) {
  const SchemeId id = static_cast<SchemeId>(state.range(0));
  std::mt19937_64 rng(5);
  const int K = 4;
  const int M = 8;
  const MatC H = iid_channel(rng, K, M);
  SchemeConfig cfg;
  cfg.q = 1000.0;
  cfg.N0 = 1.0;
  cfg.iterations = 10;
  cfg.codebook = build_codebook(8, optimal_step_size(8, cfg.q / (2.0 * K * M)));
  cfg.sd.node_budget = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scheme(id, H, cfg));
  }
}
BENCHMARK(BM_SchemeRun)
    ->Arg(static_cast<int>(SchemeId::infinite_res))
    ->Arg(static_cast<int>(SchemeId::unaware))
    ->Arg(static_cast<int>(SchemeId::proposed_sd))
    ->Arg(static_cast<int>(SchemeId::half_aware))
    ->Arg(static_cast<int>(SchemeId::heuristic))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
