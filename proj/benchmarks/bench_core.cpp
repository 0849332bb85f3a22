#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phonoscat/phonoscat.hpp"

namespace {

using namespace phonoscat;

const MaterialDatabase& db() {
  static const MaterialDatabase d = load_materials(default_materials_path());
  return d;
}

Inclusion lithium_niobate_box(double lx, double ly, double lz) {
  Inclusion inc;
  inc.size = {lx, ly, lz};
  inc.crystal = Orientation(Mat3{{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
  inc.material = db().at("LiNbO3");
  return inc;
}

MicrowaveMode mode_10ghz() {
  MicrowaveMode m;
  m.omega = 2 * std::numbers::pi * 10e9;
  m.mode_volume = 1e-18;
  m.field_direction = {0, 1, 0};
  m.eps_eff = 10;
  return m;
}

void BM_Christoffel(benchmark::State& state) {
  const MaterialSpec& m = db().at("sapphire");
  const Vec3 n = normalized(Vec3{0.3, -0.5, 0.81});
  for (auto _ : state) benchmark::DoNotOptimize(christoffel(m, n));
}
BENCHMARK(BM_Christoffel);

void BM_ChristoffelFast(benchmark::State& state) {
  const MaterialSpec& m = db().at("sapphire");
  const Vec3 n = normalized(Vec3{0.3, -0.5, 0.81});
  for (auto _ : state) benchmark::DoNotOptimize(christoffel_fast(m, n));
}
BENCHMARK(BM_ChristoffelFast);

// Argument: polar nodes; azimuth is twice that.
void BM_MieRate(benchmark::State& state) {
  const std::vector<Inclusion> incs{lithium_niobate_box(0.5e-6, 0.6e-6, 0.3e-6)};
  QuadratureSpec q;
  q.polar = static_cast<std::size_t>(state.range(0));
  q.azimuth = 2 * q.polar;
  q.check_convergence = false;
  const MicrowaveMode mode = mode_10ghz();
  for (auto _ : state) benchmark::DoNotOptimize(mie_rate(mode, incs, db().at("sapphire"), q));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q.polar * q.azimuth));
}
BENCHMARK(BM_MieRate)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const std::vector<Inclusion> incs{lithium_niobate_box(0.05e-6, 0.05e-6, 0.05e-6)};
  BruteForceSpec spec;
  spec.polar = 32;
  spec.azimuth = 64;
  const MicrowaveMode mode = mode_10ghz();
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_rate(mode, incs, db().at("sapphire"), spec));
}
BENCHMARK(BM_BruteForce)->Unit(benchmark::kMillisecond);

void BM_BraggTransfer(benchmark::State& state) {
  const Vec3 normal{0, 0, 1};
  const double w0 = 2 * std::numbers::pi * 11e9;
  BraggStack stack;
  stack.incident_impedance = longitudinal_impedance(db().at("sapphire"), normal);
  stack.exit_impedance = stack.incident_impedance;
  stack.period = {quarter_wave_layer(db().at("silicon"), normal, w0),
                     quarter_wave_layer(db().at("sapphire"), normal, w0)};
  stack.periods = 10;
  for (auto _ : state) benchmark::DoNotOptimize(bragg_transmission(stack, w0));
}
BENCHMARK(BM_BraggTransfer);

}  // namespace

BENCHMARK_MAIN();
