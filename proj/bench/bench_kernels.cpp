// Serial vs OpenMP kernels: grid transforms, the L^p power sum, and the
// sample-parallel condition verifier.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sgwave/nonlinearity.hpp"
#include "sgwave/spectral_core.hpp"

namespace {

using namespace sgwave;

OperatorPtr op_for(benchmark::State& state) {
  return build_operator(DomainSpec{}, static_cast<int>(state.range(0)));
}

std::vector<double> random_coeffs(int m) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(m));
  for (double& v : c) v = u(rng);
  return c;
}

template <kernels::Execution Exec>
void BM_Synthesize(benchmark::State& state) {
  const auto op = op_for(state);
  const auto c = random_coeffs(op->modes());
  std::vector<double> samples(static_cast<std::size_t>(op->grid_points()));
  for (auto _ : state) {
    if constexpr (Exec == kernels::Execution::Serial)
      kernels::serial::synthesize(op->basis(), c, samples);
    else
      kernels::parallel::synthesize(op->basis(), c, samples);
    benchmark::DoNotOptimize(samples.data());
  }
}

template <kernels::Execution Exec>
void BM_Analyze(benchmark::State& state) {
  const auto op = op_for(state);
  const auto samples = to_grid(SpectralField(op, random_coeffs(op->modes())));
  std::vector<double> c(static_cast<std::size_t>(op->modes()));
  for (auto _ : state) {
    if constexpr (Exec == kernels::Execution::Serial)
      kernels::serial::analyze(op->basis(), op->weights(), samples, c);
    else
      kernels::parallel::analyze(op->basis(), op->weights(), samples, c);
    benchmark::DoNotOptimize(c.data());
  }
}

template <kernels::Execution Exec>
void BM_PowerSum(benchmark::State& state) {
  const auto op = op_for(state);
  const auto samples = to_grid(SpectralField(op, random_coeffs(op->modes())));
  for (auto _ : state) {
    double s = Exec == kernels::Execution::Serial
                   ? kernels::serial::weighted_abs_power_sum(op->weights(), samples, 4.0)
                   : kernels::parallel::weighted_abs_power_sum(op->weights(), samples, 4.0);
    benchmark::DoNotOptimize(s);
  }
}

template <kernels::Execution Exec>
void BM_VerifyConditions(benchmark::State& state) {
  const auto op = build_operator(DomainSpec{}, 16);
  const auto nl = NonlinearitySpec::power_law(4.0);
  for (auto _ : state) {
    auto report = verify_conditions(nl, op, static_cast<int>(state.range(0)), 0, Exec);
    benchmark::DoNotOptimize(report);
  }
}

constexpr auto kSerial = kernels::Execution::Serial;
constexpr auto kParallel = kernels::Execution::Parallel;

}  // namespace

BENCHMARK(BM_Synthesize<kSerial>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Synthesize<kParallel>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Analyze<kSerial>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Analyze<kParallel>)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_PowerSum<kSerial>)->Arg(256)->Arg(4096);
BENCHMARK(BM_PowerSum<kParallel>)->Arg(256)->Arg(4096);
BENCHMARK(BM_VerifyConditions<kSerial>)->Arg(1000);
BENCHMARK(BM_VerifyConditions<kParallel>)->Arg(1000);

BENCHMARK_MAIN();
