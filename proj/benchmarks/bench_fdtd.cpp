#include <benchmark/benchmark.h>

#include "xs/fdtd.hpp"
#include "xs/gather.hpp"
#include "xs/scenarios.hpp"
#include "xs/wave_ops.hpp"

using namespace xs;

namespace {

Medium bench_medium(int nx, int nz) {
  return Medium::homogeneous(Grid2D(nx, nz, 20.0, 20.0), 4.0e9, 1000.0);
}

void BM_step(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Medium m = bench_medium(n, n);
  FdScheme sch(4, 0.9, 200.0, 1e-4);
  AcousticState st(m.grid);
  st.pz(n / 2, n / 2) = 1.0;
  for (auto _ : state) {
    step_inplace(st, m, sch, 4.9e-3);
    benchmark::DoNotOptimize(st.pz(n / 2, n / 2));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.grid.nodes()));
}
BENCHMARK(BM_step)->Arg(101)->Arg(201)->Arg(401);

void BM_propagate_preset(benchmark::State& state) {
  Scenario s = make_scenario("paper-homog");
  GatherSpec spec = s.src_spec();
  SourceVector sv = SourceVector::zeros(spec);
  for (int n = 0; n < s.time.nt; ++n) sv.h.at(100, n) = s.wavelet[n];
  for (auto _ : state) {
    auto rec = propagate(sv, {s.z_rec}, s.x_coords, s.medium, s.scheme, s.time,
                         Direction::causal);
    benchmark::DoNotOptimize(rec[0].p.max_abs());
  }
}
BENCHMARK(BM_propagate_preset)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_gather_dot(benchmark::State& state) {
  std::vector<double> xs;
  for (int r = 0; r < 201; ++r) xs.push_back(2000.0 + 20.0 * r);
  GatherSpec spec(1000.0, xs, TimeAxis(1123, 4.9e-3, -2.0));
  Gather a = random_gather(spec, 1), b = random_gather(spec, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gather_dot(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(a.values().size()));
}
BENCHMARK(BM_gather_dot);

}  // namespace

BENCHMARK_MAIN();
