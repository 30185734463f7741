#include <benchmark/benchmark.h>

#include "capa/capacity.hpp"
#include "capa/gaindist.hpp"
#include "capa/montecarlo.hpp"
#include "capa/spectrum.hpp"

namespace {

void BM_Eigendecompose(benchmark::State& state) {
  const capa::Aperture ap(10.0);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto d = capa::eigendecompose(ap, order, true);
    benchmark::DoNotOptimize(d.eps.data());
  }
}
BENCHMARK(BM_Eigendecompose)->Arg(64)->Arg(128)->Arg(256);

void BM_PsiSeries(benchmark::State& state) {
  const auto d = capa::eigendecompose(capa::Aperture(10.0), 128, false);
  const auto spec = capa::make_gain_spectrum(d);
  for (auto _ : state) {
    auto psi = capa::make_psi_series(spec, 1e-10);
    benchmark::DoNotOptimize(psi.psi.data());
  }
}
BENCHMARK(BM_PsiSeries);

void BM_PdfGrid(benchmark::State& state) {
  const auto d = capa::eigendecompose(capa::Aperture(10.0), 128, false);
  const auto spec = capa::make_gain_spectrum(d);
  const auto psi = capa::make_psi_series(spec, 1e-10);
  const auto mom = capa::moments(spec);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = 3.0 * mom.mean * i / (n - 1);
      acc += capa::pdf(spec, psi, x) + capa::cdf(spec, psi, x);
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PdfGrid)->Arg(256)->Arg(1024);

void BM_AvgCapacity(benchmark::State& state) {
  const auto d = capa::eigendecompose(capa::Aperture(10.0), 128, false);
  const auto spec = capa::make_gain_spectrum(d);
  const auto psi = capa::make_psi_series(spec, 1e-10);
  const auto snr = capa::SnrConfig::from_gamma(10.0);
  for (auto _ : state) {
    auto r = capa::avg_capacity(spec, psi, snr);
    benchmark::DoNotOptimize(r.ergodic_bits);
  }
}
BENCHMARK(BM_AvgCapacity);

void BM_SpectralBatch(benchmark::State& state) {
  const capa::Aperture ap(10.0);
  capa::SimulationConfig cfg;
  cfg.n_samples = state.range(0);
  const capa::SpectralFieldSimulator sim(ap, capa::resolve_config(ap, cfg));
  for (auto _ : state) {
    auto b = sim.batch(cfg.n_samples, 1);
    benchmark::DoNotOptimize(b.gains.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SpectralBatch)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
