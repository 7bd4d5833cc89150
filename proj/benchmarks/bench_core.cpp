#include <benchmark/benchmark.h>

#include "weierlab/estimates.hpp"
#include "weierlab/geodesy.hpp"
#include "weierlab/mesh.hpp"
#include "weierlab/mtriple.hpp"
#include "weierlab/sphere.hpp"
#include "weierlab/surfaces.hpp"

using namespace weierlab;

namespace {

const MeroExpr kExpr = parse_mero("(z^3 - 0.5*z + 0.1*i) / ((z - 2)*(z + 1.5*i)^2)");

void BM_TreeEval(benchmark::State& state) {
  Complex z(0.3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kExpr.try_eval(z));
    z += 1e-9;
  }
}
BENCHMARK(BM_TreeEval);

void BM_CompiledEval(benchmark::State& state) {
  CompiledExpr c(kExpr);
  Complex z(0.3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(c(z));
    z += 1e-9;
  }
}
BENCHMARK(BM_CompiledEval);

void BM_Curvature(benchmark::State& state) {
  MTriple t = make_triple(DomainSpec(Disk{}), parse_mero("1"), parse_mero("z/2 + z^2/5"), 2);
  Complex z(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(t.curvature(z));
}
BENCHMARK(BM_Curvature);

void BM_CurvatureFd(benchmark::State& state) {
  MTriple t = make_triple(DomainSpec(Disk{}), parse_mero("1"), parse_mero("z/2 + z^2/5"), 2);
  Complex z(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(t.curvature_fd(z, 1e-3, true));
}
BENCHMARK(BM_CurvatureFd);

void BM_SphericalGradient(benchmark::State& state) {
  SphericalGradient grad(kExpr);
  Complex z(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(grad(z));
}
BENCHMARK(BM_SphericalGradient);

void BM_BuildMesh(benchmark::State& state) {
  MTriple t = make_triple(DomainSpec(Disk{}), parse_mero("1"), parse_mero("z/2"), 2);
  Density d = [&](Complex z) { return t.metric_density(z); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_mesh(t.domain(), d, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_BuildMesh)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BoundaryDistance(benchmark::State& state) {
  MeshedDomain mesh = build_mesh(DomainSpec(Disk{}), [](Complex) { return 1.0; },
                                 static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(boundary_distance_field(mesh));
}
BENCHMARK(BM_BoundaryDistance)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SynthMinimal(benchmark::State& state) {
  WeierstrassData d{MinimalData{parse_mero("1"), parse_mero("z")}, DomainSpec(Disk{}), 0.0};
  MeshedDomain mesh = build_mesh(d.domain, [](Complex) { return 1.0; },
                                 static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(synth_minimal(d, mesh));
}
BENCHMARK(BM_SynthMinimal)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SynthFlatFront(benchmark::State& state) {
  WeierstrassData d{FlatFrontData{parse_mero("1"), parse_mero("z/2")}, DomainSpec(Disk{}), 0.0};
  MeshedDomain mesh = build_mesh(d.domain, [](Complex) { return 1.0; }, 50);
  for (auto _ : state) benchmark::DoNotOptimize(synth_flatfront(d, mesh));
}
BENCHMARK(BM_SynthFlatFront)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
