// Serial reference loops against the OpenMP versions. Thread count from
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>

#include "coulomb/fekete.hpp"
#include "coulomb/reference.hpp"

using namespace coulomb;

namespace {

Configuration points(std::size_t n) {
  const Potential pot = Potential::ginibre();
  return sample_equilibrium(EquilibriumMeasure(pot, droplet_for(pot)), n, 7);
}

double integrand(Complex z) { return std::exp(-std::norm(z)) * std::cos(3.0 * z.real()); }

void BM_energy_serial(benchmark::State& st) {
  const auto pot = Potential::ginibre();
  const auto cfg = points(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference::energy(pot, cfg));
}

void BM_energy_parallel(benchmark::State& st) {
  const auto pot = Potential::ginibre();
  const auto cfg = points(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(energy(pot, cfg).value);
}

void BM_gradient_serial(benchmark::State& st) {
  const auto pot = Potential::ginibre();
  const auto cfg = points(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference::energy_gradient(pot, cfg));
}

void BM_gradient_parallel(benchmark::State& st) {
  const auto pot = Potential::ginibre();
  const auto cfg = points(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(energy_gradient(pot, cfg));
}

void BM_integrate_serial(benchmark::State& st) {
  const auto g = polar_grid(3.0, st.range(0), 2 * st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(reference::integrate2d_real(g, integrand));
}

void BM_integrate_parallel(benchmark::State& st) {
  const auto g = polar_grid(3.0, st.range(0), 2 * st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(integrate2d_real(g, integrand));
}

}  // namespace

BENCHMARK(BM_energy_serial)->Arg(200)->Arg(800);
BENCHMARK(BM_energy_parallel)->Arg(200)->Arg(800);
BENCHMARK(BM_gradient_serial)->Arg(200)->Arg(800);
BENCHMARK(BM_gradient_parallel)->Arg(200)->Arg(800);
BENCHMARK(BM_integrate_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_integrate_parallel)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
