#include <benchmark/benchmark.h>

#include "chargeqfi/dynamics.hpp"
#include "chargeqfi/matrix_exp.hpp"
#include "chargeqfi/qfi.hpp"
#include "chargeqfi/spectral.hpp"
#include "chargeqfi/sweep.hpp"

namespace {

using namespace chargeqfi;

const SystemParams kParams = SystemParams::degenerate(0.4, 0.1, 0.1);

void BM_MatrixExpLiouvillian(benchmark::State& state) {
  const Eigen::MatrixXcd l = Liouvillian(kParams).matrix() * 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(l));
}
BENCHMARK(BM_MatrixExpLiouvillian);

void BM_PropagateExpm(benchmark::State& state) {
  const Liouvillian l(kParams);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_expm(bell_state_psi_plus(), l, 5.0));
  }
}
BENCHMARK(BM_PropagateExpm);

void BM_PropagateRk(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_rk(bell_state_psi_plus(), kParams, 5.0));
  }
}
BENCHMARK(BM_PropagateRk);

void BM_SpectralDecompose(benchmark::State& state) {
  const DensityMatrix rho = propagate_expm(bell_state_psi_plus(), kParams, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(rho));
}
BENCHMARK(BM_SpectralDecompose);

void BM_QfiComponents(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(qfi_components(kParams, 2.0, Estimand::kEm));
  }
}
BENCHMARK(BM_QfiComponents);

void BM_TimeSweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.params = kParams;
  cfg.points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TimeSweep)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
