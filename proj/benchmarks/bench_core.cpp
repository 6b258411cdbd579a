#include <benchmark/benchmark.h>

#include "curveq/curve.hpp"
#include "curveq/expr.hpp"
#include "curveq/helix.hpp"
#include "curveq/operators.hpp"
#include "curveq/tube.hpp"

namespace {

using namespace curveq;

const CurveDefinition& helix() {
  static const CurveDefinition c = helix_curve(HelixParams{3.0, 4.0});
  return c;
}

void BM_ParseExpression(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_expression("3*cos(t) + 0.1*sin(2*t + 0.5)^2 - exp(-t/4)"));
}
BENCHMARK(BM_ParseExpression);

void BM_EvalJet(benchmark::State& state) {
  const ExprAst ast = parse_expression("3*cos(t) + 0.1*sin(2*t + 0.5)^2 - exp(-t/4)");
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_jet(ast, t));
    t += 1e-6;
  }
}
BENCHMARK(BM_EvalJet);

void BM_ArcLengthMap(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(arclength_map(helix(), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ArcLengthMap)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FrenetFrame(benchmark::State& state) {
  const CurveGeometry g(helix());
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.frame_jet(s));
    s = s > 30.0 ? 0.0 : s + 0.01;
  }
}
BENCHMARK(BM_FrenetFrame);

void BM_GammaField(benchmark::State& state) {
  const CurveGeometry g(helix());
  for (auto _ : state) benchmark::DoNotOptimize(gamma_at(g, 7.0, 0.2, 0.1));
}
BENCHMARK(BM_GammaField);

void BM_BuildForce(benchmark::State& state) {
  const CurveGeometry g(helix());
  const CurveGrid grid = CurveGrid::make(g, static_cast<int>(state.range(0)), BoundaryCondition::dirichlet);
  const GridSamples samples = sample_grid(g, grid);
  for (auto _ : state) benchmark::DoNotOptimize(build_force(samples, grid, PhysicalConstants{}));
}
BENCHMARK(BM_BuildForce)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_ForceIdentityResidual(benchmark::State& state) {
  const CurveGeometry g(helix());
  const CurveGrid grid = CurveGrid::make(g, static_cast<int>(state.range(0)), BoundaryCondition::dirichlet);
  const GridSamples samples = sample_grid(g, grid);
  const PhysicalConstants c;
  const OperatorMatrix h = build_hamiltonian(samples, grid, c);
  const VectorOperator p = build_geometric_momentum(samples, grid, c);
  const VectorOperator f = build_force(samples, grid, c);
  for (auto _ : state) benchmark::DoNotOptimize(force_identity_residual(p, h, f, c));
}
BENCHMARK(BM_ForceIdentityResidual)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_SolveSpectrum(benchmark::State& state) {
  const CurveGeometry g(helix());
  const CurveGrid grid = CurveGrid::periodic_fixture(g, static_cast<int>(state.range(0)));
  const OperatorMatrix h = build_hamiltonian(g, grid, PhysicalConstants{});
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(h, 5));
}
BENCHMARK(BM_SolveSpectrum)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

// The distro benchmark_main archive carries LTO bytecode from another GCC.
BENCHMARK_MAIN();
