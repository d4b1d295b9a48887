#include <benchmark/benchmark.h>

#include "antipode/bmdist.hpp"
#include "antipode/certify.hpp"
#include "antipode/constructions.hpp"
#include "antipode/search.hpp"

using namespace antipode;

static void BM_CertifyCubeL2(benchmark::State& state) {
  const PointSet s = scaled_hypercube(static_cast<std::size_t>(state.range(0)), 2.0).points;
  for (auto _ : state) benchmark::DoNotOptimize(certify_set(s).d);
}
BENCHMARK(BM_CertifyCubeL2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_CertifyPrismL15(benchmark::State& state) {
  const PointSet s = prism_4n_minus_4(3, 1.5, 2.4).points;
  for (auto _ : state) benchmark::DoNotOptimize(certify_set(s).d);
}
BENCHMARK(BM_CertifyPrismL15)->Unit(benchmark::kMillisecond);

static void BM_CertifyPetty(benchmark::State& state) {
  const PointSet s = petty_parallelepiped().points;
  for (auto _ : state) benchmark::DoNotOptimize(certify_set(s).d);
}
BENCHMARK(BM_CertifyPetty)->Unit(benchmark::kMillisecond);

static void BM_CertifyOctahedronRational(benchmark::State& state) {
  const PointSet s = l1_cube_in_octahedron().points;
  for (auto _ : state) benchmark::DoNotOptimize(certify_set(s).d);
}
BENCHMARK(BM_CertifyOctahedronRational)->Unit(benchmark::kMillisecond);

static void BM_GvConstructAndCertify(benchmark::State& state) {
  for (auto _ : state) {
    const Construction c = gv_sign_vectors(20, 1.0 / 3.0, 7);
    benchmark::DoNotOptimize(certify_set(c.points).d);
  }
}
BENCHMARK(BM_GvConstructAndCertify)->Unit(benchmark::kMillisecond);

static void BM_ExactSearchCube4Strict(benchmark::State& state) {
  const PointSet pool = scaled_hypercube(4, 2.0).points;
  for (auto _ : state) benchmark::DoNotOptimize(exact_max_subset(pool, Classification::StrictHadwiger).best_d);
}
BENCHMARK(BM_ExactSearchCube4Strict)->Unit(benchmark::kMillisecond);

static void BM_AnnealL2Cube(benchmark::State& state) {
  AnnealSchedule s;
  s.steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(anneal_placement(NormSpace::lp(3, 2.0), 8, Classification::StrictHadwiger, 1, s).best_d);
  }
}
BENCHMARK(BM_AnnealL2Cube)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_CylinderOctahedronScale(benchmark::State& state) {
  const auto v = petty_dual_octahedron();
  for (auto _ : state) benchmark::DoNotOptimize(cylinder_octahedron_scale(v).alpha);
}
BENCHMARK(BM_CylinderOctahedronScale);
BENCHMARK_MAIN();
