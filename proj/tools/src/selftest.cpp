#include "phonoscat_app/selftest.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "phonoscat/phonoscat.hpp"
#include "phonoscat_app/runner.hpp"

namespace phonoscat::app {

namespace {

MicrowaveMode ten_ghz() {
  MicrowaveMode m;
  m.omega = 2.0 * kPi * 10e9;
  m.mode_volume = 1e-15;
  m.field_direction = {0.0, 1.0, 0.0};
  m.eps_eff = 10.0;
  return m;
}

// x-cut LN: crystal x along lab z, crystal z along lab y (the field).
Inclusion ln_box(const MaterialDatabase& db, const Vec3& size) {
  Inclusion inc;
  inc.size = size;
  inc.material = db.at("LiNbO3");
  inc.crystal = Orientation(Mat3{{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
  return inc;
}

std::string fmt(double x, int precision = 5) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

CheckResult slope_check(const std::string& name, const std::vector<SweepRow>& rows,
                        double expected) {
  const double s = quality_slope(rows);
  return {name, std::abs(s - expected) <= 0.05,
          "slope " + fmt(s) + ", expected " + fmt(expected) + " +- 0.05"};
}

}  // namespace

std::vector<CheckResult> run_selftest(const MaterialDatabase& db) {
  std::vector<CheckResult> out;
  const MaterialSpec& iso = db.at("sapphire_iso");
  const MaterialSpec& sapphire = db.at("sapphire");
  const RateFunction mie = [&](const MicrowaveMode& m, std::span<const Inclusion> incs) {
    return mie_rate(m, incs, iso);
  };

  const std::vector<Inclusion> small{ln_box(db, {5e-9, 10e-9, 10e-9})};
  const auto freqs = log_grid(2.0 * kPi * 1e9, 2.0 * kPi * 10e9, 6);
  out.push_back(slope_check("Q vs f slope (Rayleigh regime)",
                            sweep_frequency(ten_ghz(), small, freqs, mie), -3.0));

  const std::vector<Inclusion> guide{ln_box(db, {10e-9, 2e-9, 1e-9})};
  out.push_back(slope_check(
      "Q vs waveguide height slope",
      sweep_dimension(ten_ghz(), guide, log_grid(1e-9, 5e-9, 5),
                      [](std::vector<Inclusion>& v, double h) { set_waveguide_height(v, h); },
                      mie),
      -4.0));
  out.push_back(slope_check(
      "Q vs film thickness slope",
      sweep_dimension(ten_ghz(), small, log_grid(1e-9, 5e-9, 5),
                      [](std::vector<Inclusion>& v, double t) { set_film_thickness(v, t); },
                      mie),
      -2.0));

  {
    const double kt = ten_ghz().omega / std::sqrt(iso.stiffness[3][3] / iso.density);
    const Inclusion inc = ln_box(db, {0.05 / kt, 0.04 / kt, 0.03 / kt});
    const std::array<Inclusion, 1> one{inc};
    const double m = mie_rate(ten_ghz(), one, iso).total_rate;
    const double r = rayleigh_rate(ten_ghz(), inc, iso).total_rate;
    const double dev = std::abs(m - r) / r;
    out.push_back({"mie vs rayleigh at kL = 0.05", dev < 0.01,
                   "relative deviation " + fmt(dev, 3) + " (limit 0.01)"});
  }

  struct OracleCase {
    const char* name;
    Vec3 size;
    const MaterialSpec* substrate;
  };
  const OracleCase cases[] = {
      {"oracle, rayleigh box, isotropic", {5e-9, 10e-9, 10e-9}, &iso},
      {"oracle, mie box, isotropic", {0.5e-6, 0.6e-6, 0.3e-6}, &iso},
      {"oracle, mie box, anisotropic sapphire", {0.5e-6, 0.6e-6, 0.3e-6}, &sapphire},
  };
  for (const auto& c : cases) {
    const std::array<Inclusion, 1> one{ln_box(db, c.size)};
    const double m = converged_mie_rate(ten_ghz(), one, *c.substrate, {}, 512).total_rate;
    BruteForceSpec spec;
    spec.polar = 64;
    spec.azimuth = 128;
    const double b = brute_force_rate(ten_ghz(), one, *c.substrate, spec);
    const double dev = std::abs(b - m) / m;
    out.push_back({c.name, dev < 0.02, "mie-vs-brute-force deviation " + fmt(dev, 3) +
                                           " (limit 0.02)"});
  }
  return out;
}

int selftest_command(std::ostream& out, std::ostream& err) {
  try {
    const MaterialDatabase db = load_materials(default_materials_path());
    bool ok = true;
    for (const auto& c : run_selftest(db)) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      ok = ok && c.passed;
    }
    out << (ok ? "selftest passed" : "selftest FAILED") << "\n";
    return ok ? kExitOk : kExitNumeric;
  } catch (const ValidationError& e) {
    err << "phonoscat: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "phonoscat: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace phonoscat::app
