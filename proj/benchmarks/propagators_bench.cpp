#include <benchmark/benchmark.h>

#include "ionwake/analysis.hpp"
#include "ionwake/sweep.hpp"

namespace {

using namespace ionwake;

LaserPulse bench_pulse(double wavelength, double fwhm) {
  LaserPulse p;
  p.wavelength_nm = wavelength;
  p.peak_intensity_wcm2 = 2e14;
  p.fwhm_fs = fwhm > 0 ? fwhm : single_cycle_duration(wavelength);
  return p;
}

// args: wavelength (nm), fwhm (fs, 0 = single cycle)
void BM_Semianalytic(benchmark::State& state) {
  const auto system = n2_preset();
  const LaserPulse lp = bench_pulse(static_cast<double>(state.range(0)), static_cast<double>(state.range(1)));
  const TimeGrid grid = default_grid(system, lp);
  for (auto _ : state) benchmark::DoNotOptimize(semianalytic_evolve(system, lp, grid).back().adiabatic.rho);
  state.counters["samples"] = static_cast<double>(grid.size());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_Semianalytic)->Args({1030, 0})->Args({1644, 30})->Args({3200, 30})->Unit(benchmark::kMillisecond);

void BM_Reference(benchmark::State& state) {
  const auto system = n2_preset();
  const LaserPulse lp = bench_pulse(static_cast<double>(state.range(0)), static_cast<double>(state.range(1)));
  const TimeGrid grid = default_grid(system, lp);
  for (auto _ : state) benchmark::DoNotOptimize(solve_diabatic(system, lp, grid).back().diabatic.rho);
  state.counters["samples"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_Reference)->Args({1030, 0})->Args({1644, 30})->Args({3200, 30})->Unit(benchmark::kMillisecond);

void BM_SourceMatrices(benchmark::State& state) {
  const auto system = n2_preset();
  double f = 0.01;
  for (auto _ : state) {
    const SourceMatrix gd = source_matrix_diabatic(system, 0.9, f);
    benchmark::DoNotOptimize(source_matrix_adiabatic(gd, mixing_angle(system, f)));
    f = f > 0.1 ? 0.01 : f + 1e-4;
  }
}
BENCHMARK(BM_SourceMatrices);

// Single-cycle wavelength scan; the argument is the worker count.
void BM_Scan(benchmark::State& state) {
  ScanSpec spec;
  spec.base = bench_pulse(1030.0, 0.0);
  spec.single_cycle = true;
  spec.axes = {{"wavelength_nm", 1030.0, 3200.0, 16}};
  spec.observables = {"rho22", "abs_coh", "frac_tic"};
  spec.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_scan(spec).values.back());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(spec.size()));
}
BENCHMARK(BM_Scan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
