#include <benchmark/benchmark.h>

#include "mct/init.hpp"
#include "mct/interface.hpp"
#include "mct/measures.hpp"
#include "mct/solver.hpp"

using namespace mct;

namespace {

const Profile& profile() {
  static const Profile p = standing_wave(make_quartic_well());
  return p;
}

PhaseField circle(int res) {
  const PeriodicGrid g(2, res);
  return build_initial_field(InitialGeometry::circle({0.5, 0.5, 0}, 0.25), profile(), 4 * g.h(), g);
}

void BM_Laplacian(benchmark::State& st) {
  const PhaseField f = circle(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(laplacian(f.phi));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.phi.size()));
}

void BM_Step(benchmark::State& st) {
  const PhaseField f = circle(static_cast<int>(st.range(0)));
  SolverConfig c;
  c.scheme = st.range(1) == 0 ? Scheme::Explicit : Scheme::SemiImplicit;
  const MollifiedTransport u = mollify(TransportSpec::constant(2, {0.5, 0, 0}), f.epsilon, f.phi.grid(), 1.0);
  const double dt = resolve_dt(c, f.phi.grid(), f.epsilon, profile().well(), 0.5);
  const Stepper stepper(profile().well(), u, c);
  FlowState s{f, 0.0, 0};
  for (auto _ : st) s = stepper.step(s, dt);
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.phi.size()));
}

void BM_DensityRatio(benchmark::State& st) {
  const PhaseField f = circle(static_cast<int>(st.range(0)));
  const MeasureField m = energy_and_discrepancy(f, profile().well());
  for (auto _ : st) benchmark::DoNotOptimize(density_ratio(m, profile()));
}

void BM_ExtractInterface(benchmark::State& st) {
  const PhaseField f = circle(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(extract_interface(f.phi));
}

}  // namespace

BENCHMARK(BM_Laplacian)->Arg(256)->Arg(512);
BENCHMARK(BM_Step)->Args({256, 0})->Args({256, 1})->Args({512, 0});
BENCHMARK(BM_DensityRatio)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractInterface)->Arg(256)->Arg(512);
BENCHMARK_MAIN();
