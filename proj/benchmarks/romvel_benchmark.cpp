#include <benchmark/benchmark.h>

#include "romvel/dataset.hpp"
#include "romvel/objective.hpp"
#include "romvel/rom.hpp"

namespace romvel {
namespace {

// Run with: ./build/benchmarks/romvel_benchmarks --benchmark_filter=Apply

VelocityModel model(int nx) {
  return make_camembert_model(Grid2D::covering(2000, 2500, nx, nx * 5 / 4));
}

Acquisition acquisition(const VelocityModel& v, int m, int n) {
  Acquisition acq;
  acq.sensors = make_line_array(v.grid(), m, 100, 0, 2000);
  acq.tau = acq.pulse.nyquist_tau();
  acq.n = n;
  return acq;
}

void BM_OperatorApply(benchmark::State& state) {
  const WaveOperator op(model(static_cast<int>(state.range(0))));
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(op.dimension(), 10);
  Eigen::MatrixXd y(op.dimension(), 10);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * x.size());
}
BENCHMARK(BM_OperatorApply)->Arg(41)->Arg(81)->Arg(161);

void BM_ChebyshevDataset(benchmark::State& state) {
  const VelocityModel v = model(static_cast<int>(state.range(0)));
  const Acquisition acq = acquisition(v, 10, 8);
  for (auto _ : state) benchmark::DoNotOptimize(acq.synthesize(v));
}
BENCHMARK(BM_ChebyshevDataset)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);

void BM_BuildRom(benchmark::State& state) {
  const VelocityModel v = model(41);
  const DataSet data = acquisition(v, 10, static_cast<int>(state.range(0))).synthesize(v);
  for (auto _ : state) benchmark::DoNotOptimize(build_rom(data));
}
BENCHMARK(BM_BuildRom)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_RomObjective(benchmark::State& state) {
  const VelocityModel v = model(41);
  const Acquisition acq = acquisition(v, 10, 8);
  RomResidualSpec spec;
  spec.k = spec.d = 8;
  spec.reference = build_rom(acq.synthesize(v));
  const VelocityModel guess = VelocityModel::constant(v.grid(), 3000);
  for (auto _ : state) benchmark::DoNotOptimize(rom_objective(guess, spec, acq));
}
BENCHMARK(BM_RomObjective)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace romvel

BENCHMARK_MAIN();
