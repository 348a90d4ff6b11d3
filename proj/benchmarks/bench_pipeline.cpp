#include <benchmark/benchmark.h>

#include "trc/inference.hpp"
#include "trc/simdata.hpp"

namespace {

trc::SimResult make_sim(int patients, double grid_minutes) {
  trc::SimConfig cfg;
  cfg.patients = patients;
  cfg.days = 2;
  cfg.grid_minutes = grid_minutes;
  cfg.seed = 5;
  return trc::generate_dataset(cfg);
}

void BM_AssembleGpResp(benchmark::State& state) {
  const trc::SimResult sim = make_sim(static_cast<int>(state.range(0)), 30.0);
  const trc::ModelParams params =
      trc::default_params(trc::ModelKind::GpResp, sim.data.num_patients(), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trc::assemble_total_cov(sim.data, params));
  }
}
BENCHMARK(BM_AssembleGpResp)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_AssembleGpConv(benchmark::State& state) {
  const trc::SimResult sim = make_sim(static_cast<int>(state.range(0)), 30.0);
  const trc::ModelParams params =
      trc::default_params(trc::ModelKind::GpConv, sim.data.num_patients(), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trc::assemble_total_cov(sim.data, params));
  }
}
BENCHMARK(BM_AssembleGpConv)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FactorizeAndLml(benchmark::State& state) {
  const trc::SimResult sim = make_sim(static_cast<int>(state.range(0)), 30.0);
  const trc::ModelParams params =
      trc::default_params(trc::ModelKind::GpResp, sim.data.num_patients(), 2);
  const trc::CovarianceBundle bundle = trc::assemble_total_cov(sim.data, params);
  const Eigen::VectorXd y = trc::flatten_values(sim.data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        trc::log_marginal_likelihood(bundle.total, y, params.noise_variance));
  }
}
BENCHMARK(BM_FactorizeAndLml)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const trc::SimResult sim = make_sim(4, 30.0);
  const trc::ModelParams params = trc::default_params(trc::ModelKind::GpResp, 4, 2);
  std::vector<trc::QueryPoint> queries;
  for (int i = 0; i < 4; ++i) {
    for (double t = 24.0; t < 48.0; t += 0.5) queries.push_back({i, t});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(trc::predict(sim.data, params, queries));
  }
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
