// Serial double-loop reference against the OpenMP production path.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "alc/estimators.hpp"
#include "alc/reference.hpp"
#include "alc/simulation.hpp"

using namespace alc;

namespace {

Dataset piecewise(std::size_t n) {
  DgpSpec dgp;
  dgp.n = n;
  dgp.sigma = 0.5;
  dgp.seed = 1;
  return simulate_dataset(dgp);
}

Dataset fire() {
  DgpSpec dgp;
  dgp.family = DgpFamily::Fire2D;
  dgp.sigma = kFireSigma;
  dgp.seed = 1;
  return simulate_dataset(dgp);
}

std::vector<double> bandwidth(const Dataset& d) { return std::vector<double>(d.q(), d.q() == 1 ? 0.05 : 2.0); }

void BM_LcReference(benchmark::State& state) {
  const Dataset d = piecewise(static_cast<std::size_t>(state.range(0)));
  const auto h = bandwidth(d);
  for (auto _ : state) benchmark::DoNotOptimize(reference::lc_fit(d, d.x, KernelFamily::Uniform, h));
}

void BM_LcProduction(benchmark::State& state) {
  const Dataset d = piecewise(static_cast<std::size_t>(state.range(0)));
  const auto h = bandwidth(d);
  for (auto _ : state) benchmark::DoNotOptimize(lc_fit(d, d.x, KernelFamily::Uniform, h));
}

void BM_AlcReference(benchmark::State& state) {
  const Dataset d = piecewise(static_cast<std::size_t>(state.range(0)));
  const auto h = bandwidth(d);
  const std::vector<double> pilot = lc_fit(d, d.x, KernelFamily::Uniform, h).estimates;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::alc_fit(d, d.x, KernelFamily::Uniform, KernelFamily::Uniform, h, 1.0,
                                                pilot, pilot));
  }
}

void BM_AlcProduction(benchmark::State& state) {
  const Dataset d = piecewise(static_cast<std::size_t>(state.range(0)));
  const auto h = bandwidth(d);
  const std::vector<double> pilot = lc_fit(d, d.x, KernelFamily::Uniform, h).estimates;
  EstimatorSpec spec;
  spec.kind = EstimatorKind::ALC;
  spec.bandwidths = {h, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(alc_fit(d, d.x, spec, pilot, pilot));
}

void BM_FireLcReference(benchmark::State& state) {
  const Dataset d = fire();
  const auto h = bandwidth(d);
  for (auto _ : state) benchmark::DoNotOptimize(reference::lc_fit(d, d.x, KernelFamily::Gaussian, h));
}

void BM_FireLcProduction(benchmark::State& state) {
  const Dataset d = fire();
  const auto h = bandwidth(d);
  for (auto _ : state) benchmark::DoNotOptimize(lc_fit(d, d.x, KernelFamily::Gaussian, h));
}

}  // namespace

BENCHMARK(BM_LcReference)->Arg(400)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LcProduction)->Arg(400)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlcReference)->Arg(400)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlcProduction)->Arg(400)->Arg(1600)->Arg(6400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FireLcReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FireLcProduction)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
