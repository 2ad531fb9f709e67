#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ontoqubit/group_checks.hpp"
#include "ontoqubit/markov.hpp"
#include "ontoqubit/resource_cost.hpp"

namespace {

using namespace ontoqubit;

void BM_KernelFit(benchmark::State& state) {
  const int g = static_cast<int>(state.range(0));
  const OnticGrid grid(g, g);
  const double t = grid.azimuth_step();
  const StateEnsemble ens = make_ensemble(grid, 8, 8, t);
  FitOptions opt;
  opt.budget = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(fit_kernel(Generator::kSigmaY, t, ens, grid, opt).residual);
}
BENCHMARK(BM_KernelFit)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SimplexProjection(benchmark::State& state) {
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(state.range(0), -1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_to_simplex(y));
}
BENCHMARK(BM_SimplexProjection)->Arg(256)->Arg(1024);

void BM_LieClosure(benchmark::State& state) {
  const auto gens = sp2_generators();
  for (auto _ : state) benchmark::DoNotOptimize(lie_closure_dim(gens));
}
BENCHMARK(BM_LieClosure)->Unit(benchmark::kMillisecond);

void BM_OrbitConnect(benchmark::State& state) {
  ComplexVector psi(4);
  psi << std::complex<double>(0.3, 0.1), std::complex<double>(-0.5, 0.2), std::complex<double>(0.1, 0.6),
      std::complex<double>(0.2, -0.4);
  psi.normalize();
  for (auto _ : state) benchmark::DoNotOptimize(orbit_connect(psi).fidelity);
}
BENCHMARK(BM_OrbitConnect)->Unit(benchmark::kMillisecond);

void BM_EmpiricalRoundoff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_roundoff(RoundoffModel::base(), n));
}
BENCHMARK(BM_EmpiricalRoundoff)->Arg(64)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_IntegerAllocation(benchmark::State& state) {
  const std::vector<double> g{1.0, 2.0, 4.0};
  for (auto _ : state) benchmark::DoNotOptimize(best_integer_allocation(g, 20000, 64).error);
}
BENCHMARK(BM_IntegerAllocation)->Unit(benchmark::kMillisecond);

}  // namespace
