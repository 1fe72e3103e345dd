#include <benchmark/benchmark.h>

#include "paper_stack.hpp"
#include "vibropol/fields.hpp"
#include "vibropol/fit.hpp"
#include "vibropol/spectra.hpp"
#include "vibropol/tmm.hpp"

using namespace vibropol;

namespace {

void BM_StackResponse(benchmark::State& state) {
  const LayerStack s = fixture::paper_stack();
  double k = 1740.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stack_response(s, k, 20.0, Polarization::unpolarized));
    k = k > 7000.0 ? 400.0 : k + 0.7;
  }
}
BENCHMARK(BM_StackResponse);

// normal incidence over 400-7400 cm^-1, step given as 1/arg
void BM_SpectrumScan(benchmark::State& state) {
  const LayerStack s = fixture::paper_stack();
  const SpectralGrid g{400.0, 7400.0, 1.0 / static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_scan(s, g, 0.0, Polarization::unpolarized));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_SpectrumScan)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SplittingExtraction(benchmark::State& state) {
  const Spectrum sp = spectrum_scan(fixture::paper_stack(), {400.0, 7400.0, 1.0}, 0.0,
                                    Polarization::unpolarized);
  for (auto _ : state) benchmark::DoNotOptimize(extract_splitting(sp, Channel::T, {1500.0, 2000.0}));
}
BENCHMARK(BM_SplittingExtraction);

void BM_AngleScan(benchmark::State& state) {
  const LayerStack s = fixture::paper_stack();
  std::vector<double> angles;
  for (double a = -60.0; a <= 60.0; a += 5.0) angles.push_back(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(angle_scan(s, {1400.0, 2300.0, 1.0}, angles, Polarization::unpolarized));
  }
}
BENCHMARK(BM_AngleScan)->Unit(benchmark::kMillisecond);

void BM_FieldMap(benchmark::State& state) {
  const LayerStack s = fixture::paper_stack();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        field_map(s, {1000.0, 4500.0, 5.0}, 0.0, Polarization::unpolarized, {5.0, 200.0}));
  }
}
BENCHMARK(BM_FieldMap)->Unit(benchmark::kMillisecond);

void BM_FitResidual(benchmark::State& state) {
  FitProblem p;
  p.materials = {{"Air", ConstantMedium{1.0}},
                 {"Ge", ConstantMedium{16.0}},
                 {"Au", rakic_gold(2.5)},
                 {"PVAc", pvac_carbonyl()}};
  p.stack.ambient = "Air";
  p.stack.layers = {{"Au", 10.0}, {"PVAc", 1930.0}, {"Au", 10.0}};
  p.stack.substrate = "Ge";
  p.free = {{"layer.1.thickness", 1700.0, 2200.0},
            {"material.PVAc.osc.0.f", 3e4, 8e4},
            {"material.PVAc.osc.0.gamma", 5.0, 30.0},
            {"material.Au.damping_multiplier", 1.0, 4.0}};
  for (double k = 1500.0; k <= 2000.0; k += 2.0) p.target.k.push_back(k);
  const auto x = template_values(p);
  p.target.values = model_values(p, x);
  for (auto _ : state) benchmark::DoNotOptimize(residual_vector(p, x));
}
BENCHMARK(BM_FitResidual)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
