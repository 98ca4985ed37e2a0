#include <benchmark/benchmark.h>

#include <random>

#include "fdbem/bem_solver.hpp"
#include "fdbem/oracles.hpp"

using namespace fdbem;

namespace {

CVector random_vector(std::size_t n) {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  CVector q(n);
  for (auto& v : q) v = Complex(g(rng), g(rng));
  return q;
}

// Sphere family pairing: N = 8 * 4^n at k = pi * 2^(n-3).
double family_k(int n) { return kPi * std::ldexp(1.0, n - 3); }

void BM_KernelHyper(benchmark::State& state) {
  const WaveContext ctx(kPi);
  const Vec3 x(0.1, 0.2, 0.3), y(1.0, -0.4, 0.7), nx(0, 0, 1), ny(0.6, 0.8, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_kernel(KernelKind::NearLhs, x, y, nx, ny, ctx));
  }
}
BENCHMARK(BM_KernelHyper);

void BM_SelfTerms(benchmark::State& state) {
  const Triangle tri{Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0, 0.1, 0)};
  const WaveContext ctx(4.0 * kPi);
  for (auto _ : state) benchmark::DoNotOptimize(self_terms(tri, ctx));
}
BENCHMARK(BM_SelfTerms);

void BM_EngineSetup(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ElementGeometry g = bie_geometry(generate_sphere_mesh(n, 1.0));
  const WaveContext ctx(family_k(n));
  const OperatorKind kinds[] = {OperatorKind::Lhs, OperatorKind::Rhs};
  for (auto _ : state) {
    FdaEngine engine(g, ctx, default_solver_config().engine);
    engine.precompute(kinds);
    benchmark::DoNotOptimize(engine.memory_bytes());
  }
  state.counters["N"] = static_cast<double>(g.size());
}
BENCHMARK(BM_EngineSetup)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

void BM_Apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ElementGeometry g = bie_geometry(generate_sphere_mesh(n, 1.0));
  const WaveContext ctx(family_k(n));
  const OperatorKind kinds[] = {OperatorKind::Lhs};
  FdaEngine engine(g, ctx, default_solver_config().engine);
  engine.precompute(kinds);
  const CVector q = random_vector(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(engine.apply(OperatorKind::Lhs, q));
  state.counters["N"] = static_cast<double>(g.size());
  state.SetComplexityN(static_cast<benchmark::IterationCount>(g.size()));
}
BENCHMARK(BM_Apply)->DenseRange(3, 5)->Unit(benchmark::kMillisecond)->Complexity();

void BM_DirectSum(benchmark::State& state) {
  const ElementGeometry g = bie_geometry(generate_sphere_mesh(3, 1.0));
  const WaveContext ctx(kPi);
  const CVector q = random_vector(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(direct_sum(OperatorKind::Lhs, g, ctx, q));
}
BENCHMARK(BM_DirectSum)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
