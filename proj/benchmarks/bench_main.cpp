#include "rydchip/dressed_trap.hpp"
#include "rydchip/field_model.hpp"
#include "rydchip/master_equation.hpp"
#include "rydchip/trajectory.hpp"
#include "rydchip/transfer.hpp"

#include <benchmark/benchmark.h>

using namespace rydchip;

namespace {

CavityGateConfig paper_gate(double n_th, double delta) {
  CavityGateConfig c;
  c.g = 1.0;
  c.kappa = 1e-3;
  c.gamma = 3e-4;
  c.n_th = n_th;
  c.delta_c = delta;
  return c;
}

void BM_DiskFieldOffAxis(benchmark::State& state) {
  const FieldConfig cfg;
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(disk_field(Vec3(x, 0.0, 12.0), cfg));
    x = x < 80.0 ? x + 0.37 : 1.0;
  }
}
BENCHMARK(BM_DiskFieldOffAxis);

void BM_DiskFieldJacobian(benchmark::State& state) {
  const FieldConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(disk_field_with_jacobian(Vec3(20.0, 5.0, 12.0), cfg));
}
BENCHMARK(BM_DiskFieldJacobian);

void BM_NumericalTrap(benchmark::State& state) {
  DressingPair p;
  p.d_aux = -380.0;
  const ExponentialField field(FieldConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(numerical_trap(p, field));
}
BENCHMARK(BM_NumericalTrap);

void BM_Trajectory(benchmark::State& state) {
  const CavityGateConfig c = paper_gate(static_cast<double>(state.range(0)), 36.0);
  const double t_end = 2.0 * 57.0;
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(t_end * i / 100);
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trajectory(c, 1, index++, t_end, times));
}
BENCHMARK(BM_Trajectory)->Arg(0)->Arg(5)->Arg(10);

void BM_OptimizeDetuning(benchmark::State& state) {
  const CavityGateConfig c = paper_gate(static_cast<double>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_detuning(c));
  state.SetLabel("n_th=" + std::to_string(state.range(0)));
}
BENCHMARK(BM_OptimizeDetuning)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_MasterEquationOracle(benchmark::State& state) {
  CavityGateConfig c = paper_gate(0.3, 10.0);
  c.n_max = static_cast<int>(state.range(0));
  const std::vector<double> times{20.0};
  for (auto _ : state) benchmark::DoNotOptimize(master_equation_oracle(c, times));
}
BENCHMARK(BM_MasterEquationOracle)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
