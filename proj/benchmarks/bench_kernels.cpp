#include <benchmark/benchmark.h>

#include "trc/kernels.hpp"

namespace {

void BM_SeKernel(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += trc::se_kernel(0.7, 1.3, 0.3);
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_SeKernel);

void BM_TlseKernel(benchmark::State& state) {
  const trc::TlseParams params{0.3, 3.0};
  double x = 0.0;
  for (auto _ : state) {
    x += trc::tlse_kernel(0.7, 1.3, params);
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_TlseKernel);

void BM_ConvKernel(benchmark::State& state) {
  const trc::ConvFilter f{0.4, 0.2};
  const trc::ConvFilter g{0.6, 0.3};
  double x = 0.0;
  for (auto _ : state) {
    x += trc::conv_kernel(0.7, 1.3, f, g, 0.3);
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_ConvKernel);

void BM_LfmKernelAdaptive(benchmark::State& state) {
  const trc::LfmParams params{1.0, 1.0, {static_cast<double>(state.range(0)) / 100.0, 3.0},
                              32};
  double x = 0.0;
  for (auto _ : state) {
    x += trc::lfm_kernel(1.4, 2.1, params);
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_LfmKernelAdaptive)->Arg(25)->Arg(40)->Arg(80);

void BM_LfmKernelFixed(benchmark::State& state) {
  const trc::LfmParams params{1.0, 1.0, {0.3, 3.0}, 32};
  double x = 0.0;
  for (auto _ : state) {
    x += trc::lfm_kernel_fixed(1.4, 2.1, params, static_cast<int>(state.range(0)));
  }
  benchmark::DoNotOptimize(x);
}
BENCHMARK(BM_LfmKernelFixed)->Arg(32)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
