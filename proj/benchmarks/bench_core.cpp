#include <benchmark/benchmark.h>

#include "anyon/css_solver.hpp"
#include "anyon/error.hpp"
#include "anyon/fields.hpp"
#include "anyon/initial.hpp"
#include "anyon/manybody.hpp"

using namespace anyon;

namespace {

const bool silenced = (set_quiet(true), true);

WaveField packet(const Grid2D& g) {
  GaussianSpec spec;
  spec.momentum = {1.0, 0.5};
  WaveField u = gaussian(g, spec);
  normalize(u);
  return u;
}

void BM_GaugeField(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), 20.0);
  const KernelSpectrum k(g, SmearingRadius(0.1));
  const ScalarField rho = density(packet(g));
  for (auto _ : state) benchmark::DoNotOptimize(gauge_field(rho, k));
}
BENCHMARK(BM_GaugeField)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CssRhs(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), 20.0);
  const KernelSpectrum k(g, SmearingRadius(0.1));
  CssParams p;
  p.beta = 0.2;
  p.R = SmearingRadius(0.1);
  const WaveField u = packet(g);
  for (auto _ : state) benchmark::DoNotOptimize(css_rhs(u, p, k));
}
BENCHMARK(BM_CssRhs)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), 20.0);
  const KernelSpectrum k(g, SmearingRadius(0.1));
  CssParams p;
  p.beta = 0.2;
  p.R = SmearingRadius(0.1);
  p.dt = 0.01;
  const WaveField u = packet(g);
  for (auto _ : state) benchmark::DoNotOptimize(step(u, p, k));
}
BENCHMARK(BM_Step)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ManyBodyApply(benchmark::State& state) {
  const Grid2D g(static_cast<int>(state.range(0)), 14.0);
  ManyBodyOptions opts;
  opts.displacement = Displacement::FreeSpace;
  const ManyBodyOperator H(2, g, 0.1, SmearingRadius(0.25), opts);
  const ManyBodyState psi = tensor_power(packet(g), 2);
  for (auto _ : state) benchmark::DoNotOptimize(H.apply(psi));
}
BENCHMARK(BM_ManyBodyApply)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
