#include <benchmark/benchmark.h>

#include <vector>

#include "curselab/experiments.hpp"
#include "curselab/tensor.hpp"

using namespace curselab;

namespace {

PointSet bench_points(int n, int d) {
  std::vector<Domain> domains(static_cast<std::size_t>(d), Domain::interval(0.0, 1.0));
  return sample_uniform_points(d, n, 11, domains);
}

void BM_GramParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = TensorProblem::replicate(UnivariateFactor::affine_linear(), 12);
  const PointSet pts = bench_points(n, 12);
  for (auto _ : state) benchmark::DoNotOptimize(gram_assemble(problem, pts));
}

void BM_GramSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = TensorProblem::replicate(UnivariateFactor::affine_linear(), 12);
  const PointSet pts = bench_points(n, 12);
  for (auto _ : state) benchmark::DoNotOptimize(gram_assemble_serial(problem, pts));
}

void BM_WorstCaseError(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = TensorProblem::replicate(UnivariateFactor::trig1(), 8);
  const PointSet pts = bench_points(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(worst_case_error_sq(problem, pts));
}

void BM_RandomExperiment(benchmark::State& state) {
  ExperimentConfig cfg{TensorProblem::replicate(UnivariateFactor::affine_linear(), 12)};
  cfg.n = 64;
  cfg.trials = 20;
  cfg.seed = 7;
  cfg.parallel_degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(random_info_experiment(cfg));
}

}  // namespace

BENCHMARK(BM_GramParallel)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_GramSerial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_WorstCaseError)->Arg(16)->Arg(128);
BENCHMARK(BM_RandomExperiment)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
