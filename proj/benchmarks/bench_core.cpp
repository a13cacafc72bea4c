// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "mg1/dataset.hpp"
#include "mg1/mlp.hpp"
#include "mg1/qbd.hpp"
#include "mg1/sampler.hpp"
#include "mg1/simulate.hpp"

namespace {

mg1::QueueInstance instance_with_phases(int phases) {
  mg1::SamplerConfig cfg;
  cfg.max_ph = phases;
  for (std::uint64_t i = 0;; ++i) {
    mg1::Rng rng = mg1::Rng::derive(1, {i});
    auto inst = mg1::sample_instance(cfg, rng);
    if (inst.service.phases() == phases) {
      inst.lambda = 0.7;
      return inst;
    }
  }
}

void BM_SamplePh(benchmark::State& state) {
  mg1::SamplerConfig cfg;
  cfg.max_ph = static_cast<int>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    mg1::Rng rng = mg1::Rng::derive(7, {i++});
    benchmark::DoNotOptimize(mg1::sample_ph(cfg, rng));
  }
}
BENCHMARK(BM_SamplePh)->Arg(5)->Arg(20);

void BM_QbdSolve(benchmark::State& state) {
  const auto inst = instance_with_phases(static_cast<int>(state.range(0)));
  mg1::SolveOptions opt;
  opt.enforce_tail = false;
  for (auto _ : state) benchmark::DoNotOptimize(mg1::solve(inst, opt));
}
BENCHMARK(BM_QbdSolve)->Arg(1)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_GenerateSample(benchmark::State& state) {
  mg1::GenerateOptions opt;
  opt.count = 100;
  for (auto _ : state) benchmark::DoNotOptimize(mg1::generate(opt));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_GenerateSample)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto inst = instance_with_phases(5);
  mg1::SimConfig cfg;
  cfg.horizon_events = state.range(0);
  cfg.warmup_events = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(mg1::simulate_queue(inst, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_MlpForward(benchmark::State& state) {
  mg1::Rng rng(3);
  const auto model = mg1::MlpModel::initialize(mg1::default_layer_dims(5), rng);
  const mg1::Matrix x = mg1::Matrix::Random(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(128);

void BM_MlpBackward(benchmark::State& state) {
  mg1::Rng rng(4);
  const auto model = mg1::MlpModel::initialize(mg1::default_layer_dims(5), rng);
  const mg1::Matrix x = mg1::Matrix::Random(state.range(0), 5);
  mg1::Matrix y = mg1::Matrix::Constant(state.range(0), 70, 1.0 / 70.0);
  for (auto _ : state) benchmark::DoNotOptimize(mg1::backward(model, x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpBackward)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
