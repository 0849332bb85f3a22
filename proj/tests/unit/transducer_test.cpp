#include <gtest/gtest.h>

#include "phonoscat/errors.hpp"
#include "phonoscat/transducer.hpp"

namespace phonoscat {
namespace {

const MaterialDatabase& db() {
  static const MaterialDatabase d = load_materials(default_materials_path());
  return d;
}

MicrowaveMode mode(double v_e = 1e-15) {
  MicrowaveMode m;
  m.omega = 2 * kPi * 10e9;
  m.mode_volume = v_e;
  m.field_direction = {0, 1, 0};
  m.eps_eff = 10.0;
  return m;
}

Inclusion ln_box(const Vec3& size) {
  Inclusion inc;
  inc.size = size;
  inc.material = db().at("LiNbO3");
  inc.crystal = Orientation(Mat3{{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
  return inc;
}

QuadratureSpec quick() {
  QuadratureSpec q;
  q.polar = 32;
  q.azimuth = 64;
  q.check_convergence = false;
  return q;
}

TEST(FigureOfMerit, IndependentOfModeVolume) {
  const Inclusion inc = ln_box({5e-9, 10e-9, 10e-9});
  const std::array<Inclusion, 1> one{inc};
  EoModel eo{2 * kPi * 1e3, 1e-15, 0.7};
  const MaterialSpec& sub = db().at("sapphire_iso");
  const double ref = figure_of_merit(eo, mode(1e-15), rayleigh_rate(mode(1e-15), inc, sub));
  const double ref_mie = figure_of_merit(eo, mode(1e-15), mie_rate(mode(1e-15), one, sub, quick()));
  for (double v : {1e-14, 1e-13, 1e-12}) {
    EXPECT_NEAR(figure_of_merit(eo, mode(v), rayleigh_rate(mode(v), inc, sub)), ref, 1e-9 * ref);
    EXPECT_NEAR(figure_of_merit(eo, mode(v), mie_rate(mode(v), one, sub, quick())), ref_mie,
                1e-9 * ref_mie);
  }
}

TEST(FigureOfMerit, OverlapDependence) {
  const Inclusion inc = ln_box({5e-9, 10e-9, 10e-9});
  const RadiationResult r = rayleigh_rate(mode(), inc, db().at("sapphire_iso"));
  EXPECT_EQ(figure_of_merit({1e4, 1e-15, 0.0}, mode(), r), 0.0);
  double last = 0.0;
  for (double xi : {0.1, 0.3, 0.6, 1.0}) {
    const double eta = figure_of_merit({1e4, 1e-15, xi}, mode(), r);
    EXPECT_GT(eta, last);
    last = eta;
  }
  const double g_hz = 1e4 / (2 * kPi);
  EXPECT_NEAR(last, g_hz * g_hz * r.quality, 1e-9 * last);
  EXPECT_THROW(figure_of_merit({1e4, 1e-15, 1.5}, mode(), r), ValidationError);
  MicrowaveMode other = mode();
  other.omega *= 1.01;
  EXPECT_THROW(figure_of_merit({1e4, 1e-15, 1.0}, other, r), ValidationError);
}

TEST(FigureOfMerit, ConfinementOverlap) {
  double last = 0.0;
  for (double h : {0.05e-6, 0.1e-6, 0.3e-6, 1e-6, 3e-6}) {
    const double xi = confinement_overlap(h, 2.0, 1.55e-6, 1.35);
    EXPECT_GT(xi, last);
    EXPECT_LT(xi, 1.0);
    last = xi;
  }
  EXPECT_THROW(confinement_overlap(-1.0, 2.0, 1.55e-6, 1.35), ValidationError);
}

TEST(FigureOfMerit, SweepProducesOneRowPerValue) {
  const MaterialSpec& sub = db().at("sapphire_iso");
  const std::vector<double> hs{2e-9, 4e-9, 8e-9};
  const auto rows = sweep_figure_of_merit(
      hs,
      [](double h) {
        MeritSetup s{mode(), {ln_box({10e-9, 2 * h, h})}, {2 * kPi * 1e3, 1e-15, 1.0}};
        return s;
      },
      [&](const MicrowaveMode& m, std::span<const Inclusion> incs) {
        return rayleigh_rate(m, incs[0], sub);
      });
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].coupling_hz, 1e3, 1e-9);
  EXPECT_GT(rows[0].eta, rows[2].eta);
}

// Piezo tensor of a 6mm (transversely isotropic) crystal with its axis
// along crystal z.
Mat3x6 hexagonal_piezo() {
  Mat3x6 d{};
  d[0][4] = d[1][3] = 4e-11;
  d[2][0] = d[2][1] = -2e-12;
  d[2][2] = 5e-12;
  return d;
}

TEST(OrientationSweep, SymmetryAxisRotationLeavesQualityUnchanged) {
  Inclusion inc = ln_box({0.2e-6, 0.3e-6, 0.25e-6});
  inc.crystal = Orientation{};
  inc.material.piezo = hexagonal_piezo();
  const std::vector<double> angles{0.0, 0.4, 1.3, 2.8};
  const auto rows =
      sweep_orientation(mode(), inc, db().at("sapphire"), {0, 0, 1}, angles, quick());
  for (const auto& r : rows) {
    EXPECT_NEAR(r.radiation.quality, rows[0].radiation.quality, 1e-9 * rows[0].radiation.quality);
    EXPECT_NEAR(r.geometry, rows[0].geometry, 1e-9);
  }
}

TEST(OrientationSweep, TrigonalThreeFoldAxisAndAnisotropy) {
  const Inclusion inc = ln_box({20e-9, 20e-9, 20e-9});
  const MaterialSpec& sub = db().at("sapphire_iso");
  // Crystal z sits on lab y here; a 120 degree turn about it is a symmetry.
  const std::vector<double> thirds{0.0, 2 * kPi / 3};
  const auto sym = sweep_orientation(mode(), inc, sub, {0, 1, 0}, thirds, quick());
  EXPECT_NEAR(sym[1].radiation.quality, sym[0].radiation.quality,
              1e-9 * sym[0].radiation.quality);

  const std::vector<double> angles = linear_grid(0.0, kPi, 13);
  const auto rows = sweep_orientation(mode(), inc, sub, {0, 0, 1}, angles, quick());
  double qmin = rows[0].radiation.quality, qmax = qmin;
  for (const auto& r : rows) {
    qmin = std::min(qmin, r.radiation.quality);
    qmax = std::max(qmax, r.radiation.quality);
    EXPECT_GE(r.geometry, 0.0);
    EXPECT_LE(r.geometry, 1.0);
  }
  EXPECT_GE(qmax / qmin, 3.0);
  EXPECT_THROW(sweep_orientation(mode(), inc, sub, {0, 0, 1}, std::vector<double>{}, quick()),
               ValidationError);
}

TEST(OrientationSweep, HalfTurnAboutBoxAxisAndNonPiezoLimit) {
  // Box edges along the rotation axis and an isotropic substrate: a half
  // turn only flips the sign of the in-plane response.
  const Inclusion inc = ln_box({0.3e-6, 0.2e-6, 0.15e-6});
  const MaterialSpec& sub = db().at("sapphire_iso");
  const std::vector<double> angles{0.0, kPi};
  const auto rows = sweep_orientation(mode(), inc, sub, {0, 0, 1}, angles, quick());
  EXPECT_NEAR(rows[1].radiation.quality, rows[0].radiation.quality,
              1e-9 * rows[0].radiation.quality);

  Inclusion inert = inc;
  inert.material = make_isotropic("glass", 2200.0, 1.6e10, 3.1e10, 3.9);
  for (const auto& r : sweep_orientation(mode(), inert, sub, {0, 0, 1}, angles, quick()))
    EXPECT_TRUE(std::isinf(r.radiation.quality));
}

}  // namespace
}  // namespace phonoscat
