#include <random>

#include <benchmark/benchmark.h>

#include "adiabloch/bloch.hpp"
#include "adiabloch/effective.hpp"
#include "adiabloch/models.hpp"
#include "adiabloch/reproduce.hpp"

using namespace adiabloch;

namespace {

struct LambdaData {
  CMatrix b;
  CMatrix c;
  SpectralDecomposition dec;
};

const LambdaData& lambda_data() {
  static const LambdaData data = [] {
    const LindbladModel m = lambda_model({}, 10.0);
    LambdaData d{build_superop(m, Part::strong).matrix, build_superop(m, Part::weak).matrix, {}};
    d.dec = decompose(d.b);
    return d;
  }();
  return data;
}

void BM_Expm(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Index n = state.range(0);
  const CMatrix a = random_complex(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(9)->Arg(16)->Arg(25)->Arg(64);

void BM_Decompose(benchmark::State& state) {
  std::mt19937_64 rng(2);
  RandomModelOptions opts;
  opts.dim = state.range(0);
  const CMatrix b = build_superop(random_model(rng, opts), Part::strong).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(decompose(b));
}
BENCHMARK(BM_Decompose)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_DecomposeLambda(benchmark::State& state) {
  const CMatrix& b = lambda_data().b;
  for (auto _ : state) benchmark::DoNotOptimize(decompose(b));
}
BENCHMARK(BM_DecomposeLambda);

void BM_SolveBlock(benchmark::State& state) {
  const auto& d = lambda_data();
  SolveOptions opts;
  opts.method = state.range(0) == 0 ? SolveMethod::newton : SolveMethod::fixed_point;
  for (auto _ : state) {
    for (std::size_t l = 0; l < d.dec.blocks.size(); ++l)
      benchmark::DoNotOptimize(solve_block(d.dec, d.c, 10.0, l, opts));
  }
}
BENCHMARK(BM_SolveBlock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EffectiveSeries(benchmark::State& state) {
  const auto& d = lambda_data();
  for (auto _ : state) benchmark::DoNotOptimize(effective_series(d.dec, d.c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EffectiveSeries)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const LindbladModel m = lambda_model({}, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(m, 10.0));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

void BM_DistanceCurve(benchmark::State& state) {
  const auto& d = lambda_data();
  const CMatrix exact = 10.0 * d.b + d.c;
  const CMatrix approx = 10.0 * d.b + d.dec.blocks[0].projection * d.c * d.dec.blocks[0].projection;
  const auto times = log_time_grid(1e-2, 1e4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(distance_curve(exact, approx, times));
}
BENCHMARK(BM_DistanceCurve)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
