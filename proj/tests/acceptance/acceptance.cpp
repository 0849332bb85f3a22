// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned here and printed next to the
// measured value.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phonoscat/constants.hpp"
#include "phonoscat/phonoscat.hpp"
#include "phonoscat_app/runner.hpp"

namespace {

using namespace phonoscat;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
constexpr double kGHz = 1e9;
constexpr double kUm = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const MaterialDatabase& db() {
  static const MaterialDatabase d = load_materials(default_materials_path());
  return d;
}

// X-cut lithium niobate: crystal z along lab y, crystal y along lab x and
// crystal x along lab z.
Inclusion ln_box(const Vec3& size) {
  Inclusion inc;
  inc.size = size;
  inc.crystal = Orientation(Mat3{{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
  inc.material = db().at("LiNbO3");
  return inc;
}

MicrowaveMode mode(double f_ghz, double ve_um3, const Vec3& field = {0, 1, 0}) {
  MicrowaveMode m;
  m.omega = 2 * kPi * f_ghz * kGHz;
  m.mode_volume = ve_um3 * kUm * kUm * kUm;
  m.field_direction = field;
  m.eps_eff = 10.0;
  return m;
}

double slow_shear_velocity() { return christoffel(db().at("sapphire_iso"), {1, 0, 0})[0].phase_velocity; }

QuadratureSpec quad(std::size_t polar, std::size_t azimuth) {
  QuadratureSpec q;
  q.polar = polar;
  q.azimuth = azimuth;
  return q;
}

RateFunction converged_on(const MaterialSpec& sub, QuadratureSpec q, std::size_t max_polar) {
  return [&sub, q, max_polar](const MicrowaveMode& m, std::span<const Inclusion> incs) {
    return app::converged_mie_rate(m, incs, sub, q, max_polar);
  };
}

std::vector<double> qualities(const std::vector<SweepRow>& rows) {
  std::vector<double> q;
  for (const auto& r : rows) q.push_back(r.result.quality);
  return q;
}

// ---------------------------------------------------------------------------

Outcome frequency_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  const MaterialSpec& sub = db().at("sapphire_iso");
  const std::vector<Inclusion> incs{ln_box({5e-9, 10e-9, 10e-9})};
  const std::vector<double> omegas = log_grid(2 * kPi * 1 * kGHz, 2 * kPi * 10 * kGHz, 10);
  const auto rows = sweep_frequency(mode(10, 1), incs, omegas, converged_on(sub, {}, 512));
  double max_kl = 0.0;
  for (const auto& r : rows) max_kl = std::max(max_kl, r.result.max_kl);
  const double slope = quality_slope(rows);
  const double dt = seconds_since(t0);
  return {std::abs(slope + 3.0) <= 0.05 && max_kl < 0.1 && dt < 60.0,
          fmt("slope %.5f (want -3 +- 0.05), max kL %.4f (< 0.1), %.2f s (< 60 s)", slope, max_kl, dt)};
}

Outcome size_scaling() {
  const MaterialSpec& sub = db().at("sapphire_iso");
  const RateFunction rate = converged_on(sub, {}, 512);

  // Waveguide: fixed 10 nm length, h x 2h cross-section.
  const std::vector<Inclusion> guide{ln_box({10e-9, 2e-9, 1e-9})};
  const std::vector<double> hs = linear_grid(1e-9, 5e-9, 9);
  const auto hrows = sweep_dimension(
      mode(10, 1), guide, hs, [](std::vector<Inclusion>& v, double h) { set_waveguide_height(v, h); },
      rate);
  std::vector<double> hx, hq;
  for (const auto& r : hrows)
    if (r.result.regime == Regime::Rayleigh) {
      hx.push_back(r.parameter);
      hq.push_back(r.result.quality);
    }
  const double h_slope = hx.size() >= 2 ? loglog_slope(hx, hq) : std::nan("");

  const std::vector<Inclusion> film{ln_box({10e-9, 10e-9, 1e-9})};
  const std::vector<double> ts = log_grid(0.5e-9, 5e-9, 8);
  const auto trows = sweep_dimension(
      mode(10, 1), film, ts, [](std::vector<Inclusion>& v, double t) { set_film_thickness(v, t); },
      rate);
  const double t_slope = quality_slope(trows);

  return {hx.size() >= 2 && std::abs(h_slope + 4.0) <= 0.05 && std::abs(t_slope + 2.0) <= 0.05,
          fmt("h slope %.5f over %zu Rayleigh-tagged rows (want -4 +- 0.05), film slope %.5f "
              "(want -2 +- 0.05)",
              h_slope, hx.size(), t_slope)};
}

Outcome mie_rayleigh_limit() {
  const MaterialSpec& sub = db().at("sapphire_iso");
  const double k = 2 * kPi * 10 * kGHz / slow_shear_velocity();
  const double edge = 0.05 / k;
  double worst = 0.0, worst_kl = 0.0;
  for (const Vec3& shape : {Vec3{1.0, 1.0, 1.0}, Vec3{1.0, 0.5, 0.25}, Vec3{0.2, 1.0, 0.6}}) {
    const std::vector<Inclusion> incs{ln_box(edge * shape)};
    const RadiationResult mie = mie_rate(mode(10, 1), incs, sub);
    const RadiationResult ray = rayleigh_rate(mode(10, 1), incs[0], sub);
    worst = std::max(worst, rel(mie.total_rate, ray.total_rate));
    worst_kl = std::max(worst_kl, mie.max_kl);
  }
  return {worst < 0.01 && worst_kl <= 0.05 + 1e-12,
          fmt("max |mie - rayleigh| / rayleigh = %.3e (< 1%%) at kL <= %.4f", worst, worst_kl)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* label;
    const char* substrate;
    Vec3 size;
  };
  const Case cases[] = {
      {"rayleigh 5x10x10 nm, isotropic", "sapphire_iso", {5e-9, 10e-9, 10e-9}},
      {"mie 300x200x250 nm, isotropic", "sapphire_iso", {0.3e-6, 0.2e-6, 0.25e-6}},
      {"mie 500x600x300 nm, sapphire", "sapphire", {0.5e-6, 0.6e-6, 0.3e-6}},
  };
  bool ok = true;
  bool saw_rayleigh = false, saw_mie = false;
  std::string detail;
  for (const Case& c : cases) {
    const MaterialSpec& sub = db().at(c.substrate);
    const std::vector<Inclusion> incs{ln_box(c.size)};
    const MicrowaveMode m = mode(10, 1);
    const RadiationResult mie = app::converged_mie_rate(m, incs, sub, {}, 1024);
    BruteForceSpec spec;
    spec.sigma = m.omega / 200.0;
    spec.polar = 64;
    spec.azimuth = 128;
    const double brute = brute_force_rate(m, incs, sub, spec);
    const double dev = rel(brute, mie.total_rate);
    ok = ok && dev < 0.02;
    (mie.regime == Regime::Rayleigh ? saw_rayleigh : saw_mie) = true;
    detail += fmt("%s%s: %.3f%%", detail.empty() ? "" : "; ", c.label, 100 * dev);
  }
  const double dt = seconds_since(t0);
  return {ok && saw_rayleigh && saw_mie && dt < 600.0,
          detail + fmt(" (each < 2%%, sigma = w0/200), %.1f s (< 600 s)", dt)};
}

Outcome mie_oscillation() {
  const MaterialSpec& sub = db().at("sapphire_iso");
  const double k = 2 * kPi * 10 * kGHz / slow_shear_velocity();
  // Width 2h spans k * 2h = pi .. 6 pi on the slow shear branch.
  const std::vector<double> hs = linear_grid(kPi / (2 * k), 6 * kPi / (2 * k), 40);
  const std::vector<Inclusion> guide{ln_box({5e-6, 0.4e-6, 0.2e-6})};
  const auto rows = sweep_dimension(
      mode(10, 31.25), guide, hs,
      [](std::vector<Inclusion>& v, double h) { set_waveguide_height(v, h); },
      converged_on(sub, quad(256, 128), 1024));
  const std::vector<double> q = qualities(rows);
  int maxima = 0, minima = 0;
  for (std::size_t i = 1; i + 1 < q.size(); ++i) {
    if (q[i] > q[i - 1] && q[i] > q[i + 1]) ++maxima;
    if (q[i] < q[i - 1] && q[i] < q[i + 1]) ++minima;
  }
  return {maxima >= 1 && minima >= 1,
          fmt("k*2h from %.3f to %.3f: %d local max, %d local min (want >= 1 each)", k * 2 * hs.front(),
              k * 2 * hs.back(), maxima, minima)};
}

Outcome dual_suppression() {
  const MaterialSpec& sub = db().at("sapphire_iso");
  const Inclusion inc = ln_box({1e-9, 1e-9, 1e-9});
  const MicrowaveMode m = mode(10, 1);
  const QuadratureSpec q = quad(64, 128);
  const Vec3 axis{0, 0, 1};  // stacked, perpendicular to the drive field
  const double k = m.omega / slow_shear_velocity();
  const double lambda = 2 * kPi / k;

  std::vector<double> kd, supp;
  for (double d : log_grid(2e-9, 0.3 / k, 8)) {
    const auto r = dual_waveguide_rate(m, inc, d * axis, -1, sub, q);
    kd.push_back(k * d);
    supp.push_back(r.suppression);
  }
  const double slope = loglog_slope(kd, supp);

  const double at_zero = dual_waveguide_rate(m, inc, {0, 0, 0}, -1, sub, q).suppression;

  double min_gain = std::numeric_limits<double>::infinity();
  for (double frac : {500.0, 300.0, 100.0}) {  // lambda / 1000 would overlap the 1 nm boxes
    const auto r = dual_waveguide_rate(m, inc, (lambda / frac) * axis, -1, sub, q);
    min_gain = std::min(min_gain, r.quality_gain());
  }
  return {std::abs(slope - 2.0) <= 0.05 && at_zero == 0.0 && min_gain >= 1e3,
          fmt("slope %.5f for kd < 0.3 (want 2 +- 0.05), suppression at d = 0: %g (want exactly 0), "
              "smallest Q gain for d <= lambda/100: %.1f (want >= 1000)",
              slope, at_zero, min_gain)};
}

Outcome bragg_mirror() {
  const Vec3 normal{0, 0, 1};
  const double w0 = 2 * kPi * 11 * kGHz;
  const MaterialSpec& sapphire = db().at("sapphire");
  BraggStack stack;
  stack.period = {quarter_wave_layer(db().at("silicon"), normal, w0),
                  quarter_wave_layer(sapphire, normal, w0)};
  stack.incident_impedance = longitudinal_impedance(sapphire, normal);
  stack.exit_impedance = stack.incident_impedance;

  const std::vector<Inclusion> film{ln_box({20e-9, 20e-9, 1e-9})};
  const RadiationResult bare = mie_rate(mode(11, 1), film, sapphire);

  double worst_sum = 0.0, best_gain = 0.0, prev_t = 2.0;
  bool decreasing = true;
  for (std::size_t n = 0; n <= 10; ++n) {
    stack.periods = n;
    for (int i = 0; i <= 400; ++i) {
      const BraggResponse r = bragg_transmission(stack, w0 * (0.01 + 4.0 * i / 400.0));
      worst_sum = std::max(worst_sum, std::abs(r.reflectance + r.transmittance - 1.0));
    }
    const double t = bragg_transmission(stack, w0).transmittance;
    if (n > 0 && !(t < prev_t)) decreasing = false;
    prev_t = t;
    best_gain = std::max(best_gain, bare.total_rate / mitigated_rate(bare, stack, w0).total_rate);
  }
  return {worst_sum <= 1e-12 && decreasing && best_gain >= 10.0,
          fmt("max |R + T - 1| = %.2e (<= 1e-12), T(w0) strictly decreasing for n = 0..10: %s, "
              "best Q gain %.3g (>= 10) at 11 GHz",
              worst_sum, decreasing ? "yes" : "no", best_gain)};
}

Outcome eta_invariance() {
  const MaterialSpec& sub = db().at("sapphire_iso");
  const std::vector<Inclusion> guide{ln_box({5e-6, 1.2e-6, 0.6e-6})};
  EoModel eo;
  eo.reference_coupling = 2 * kPi * 33.3e3;
  eo.reference_volume = 31.25 * kUm * kUm * kUm;
  eo.overlap = 0.4;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double ve : log_grid(1.0, 1000.0, 7)) {
    const MicrowaveMode m = mode(10, ve);
    QuadratureSpec q = quad(128, 64);
    q.check_convergence = false;
    const double eta = figure_of_merit(eo, m, mie_rate(m, guide, sub, q));
    lo = std::min(lo, eta);
    hi = std::max(hi, eta);
  }
  const double drift = hi / lo - 1.0;
  return {drift < 1e-9, fmt("eta %.6e Hz^2, max/min - 1 = %.2e over V_E 1..1000 um^3 (< 1e-9)", hi, drift)};
}

Outcome anchors() {
  const MaterialSpec& sub = db().at("sapphire_iso");
  auto in_band = [](double x, double target) { return x >= target / 30.0 && x <= target * 30.0; };

  // Waveguide-scale transducer: 5 um of 1.2 x 0.6 um LN guide.
  const std::vector<Inclusion> guide{ln_box({5e-6, 1.2e-6, 0.6e-6})};
  const double q_guide =
      app::converged_mie_rate(mode(10, 31.25), guide, sub, quad(256, 128), 1024).quality;

  // Parasitic 1 nm LN film under a 20 x 20 um pad, drive field along crystal y.
  const std::vector<Inclusion> film{ln_box({20e-6, 20e-6, 1e-9})};
  const double q_film =
      app::converged_mie_rate(mode(10, 400, {1, 0, 0}), film, sub, quad(512, 512), 1024).quality;

  // Peak eta over guide height; V_ref equals the simulated mode volume.
  const std::vector<double> hs = linear_grid(0.05e-6, 1.5e-6, 30);
  const RateFunction rate = converged_on(sub, quad(256, 128), 1024);
  const auto rows = sweep_figure_of_merit(
      hs,
      [](double h) {
        MeritSetup s;
        s.mode = mode(10, 31.25);
        s.inclusions = {ln_box({5e-6, 2 * h, h})};
        s.eo.reference_coupling = 2 * kPi * 33.3e3;
        s.eo.reference_volume = s.mode.mode_volume;
        s.eo.overlap = 0.5 * confinement_overlap(h, 2.0, 1.55e-6, 1.35);
        return s;
      },
      rate);
  const auto peak = std::max_element(rows.begin(), rows.end(),
                                     [](const MeritRow& a, const MeritRow& b) { return a.eta < b.eta; });
  const double shear_wavelength = slow_shear_velocity() / (10 * kGHz);

  return {in_band(q_guide, 1e3) && in_band(q_film, 1e6) && in_band(peak->eta, 1e10),
          fmt("waveguide Q %.3g (1e3, factor 30), 1 nm film Q %.3g (1e6, factor 30), peak eta %.3g Hz^2 "
              "(1e10, factor 30) at h = %.3g um (shear wavelength %.3g um)",
              q_guide, q_film, peak->eta, peak->parameter / kUm, shear_wavelength / kUm)};
}

// ---- property suites ------------------------------------------------------

double rel_mat(const Mat6& a, const Mat6& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      num = std::max(num, std::abs(a[i][j] - b[i][j]));
      den = std::max(den, std::abs(b[i][j]));
    }
  return num / den;
}

double rotation_oracle_error() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Mat6 c = oracle::random_stiffness(rng);
    const Mat3x6 d = oracle::random_piezo(rng);
    const Orientation r1(oracle::random_rotation(rng)), r2(oracle::random_rotation(rng));

    const Mat6 twice = rotate_stiffness(rotate_stiffness(c, r1), r2);
    worst = std::max(worst, rel_mat(twice, rotate_stiffness(c, r2.compose(r1))));

    const auto full = oracle::rotate(oracle::expand(c), r1.matrix());
    const auto voigt = oracle::expand(rotate_stiffness(c, r1));
    const auto full_d = oracle::rotate(oracle::expand(d), r1.matrix());
    const auto voigt_d = oracle::expand(rotate_piezo(d, r1));
    double scale = 0.0, scale_d = 0.0, err = 0.0, err_d = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
          scale_d = std::max(scale_d, std::abs(full_d[i][j][k]));
          err_d = std::max(err_d, std::abs(full_d[i][j][k] - voigt_d[i][j][k]));
          for (std::size_t l = 0; l < 3; ++l) {
            scale = std::max(scale, std::abs(full[i][j][k][l]));
            err = std::max(err, std::abs(full[i][j][k][l] - voigt[i][j][k][l]));
          }
        }
    worst = std::max({worst, err / scale, err_d / scale_d});
  }
  return worst;
}

// Shear emission recomputed with the degenerate polarization pair turned by
// `mix` at every node.
double mixed_shear_rate(const MicrowaveMode& m, const Inclusion& inc, const MaterialSpec& sub,
                        double mix, std::size_t polar, std::size_t azimuth) {
  const SphereRule rule = sphere_rule(polar, azimuth);
  const double vt = 1e-12;
  const Mat3 s = induced_strain(inc.lab_piezo(), m.zero_point_field() * m.field_direction);
  std::vector<double> terms;
  for (std::size_t i = 0; i < rule.directions.size(); ++i) {
    const Vec3& n = rule.directions[i];
    const BranchSet b = christoffel(sub, n);
    const Vec3 e0 = std::cos(mix) * b[0].polarization + std::sin(mix) * b[1].polarization;
    const Vec3 e1 = -std::sin(mix) * b[0].polarization + std::cos(mix) * b[1].polarization;
    const double v = b[0].phase_velocity;
    const double k = m.omega / v;
    const double u0 = std::sqrt(constants::hbar / (2 * sub.density * m.omega * vt));
    for (const Vec3& e : {e0, e1}) {
      const double a = inc.volume() * contract(s, stress_from_dyad(sub.stiffness, n, e)) * u0 * k *
                       std::abs(form_factor(inc, k * n));
      terms.push_back(rule.weights[i] * k * k / v * a * a);
    }
  }
  return vt / (4 * kPi * kPi * constants::hbar * constants::hbar) * pairwise_sum(terms);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome property_suites() {
  const auto t0 = std::chrono::steady_clock::now();
  const MaterialSpec& iso = db().at("sapphire_iso");
  const MaterialSpec& sapphire = db().at("sapphire");
  const MicrowaveMode m = mode(10, 1);

  // V_T cancellation.
  const std::vector<Inclusion> box{ln_box({0.3e-6, 0.2e-6, 0.25e-6})};
  QuadratureSpec q = quad(32, 64);
  q.check_convergence = false;
  double vt_err = 0.0;
  const double ref = mie_rate(m, box, sapphire, q).total_rate;
  for (double vt : {1e-18, 1e-9, 1.0}) {
    q.quantization_volume = vt;
    vt_err = std::max(vt_err, rel(mie_rate(m, box, sapphire, q).total_rate, ref));
  }
  BruteForceSpec bf;
  bf.polar = 16;
  bf.azimuth = 32;
  bf.quantization_volume = 1e-15;
  const double b1 = brute_force_rate(m, box, iso, bf);
  bf.quantization_volume = 1e-9;
  vt_err = std::max(vt_err, rel(brute_force_rate(m, box, iso, bf), b1));

  // Degenerate shear basis.
  QuadratureSpec qd = quad(32, 64);
  qd.check_convergence = false;
  const RadiationResult lib = mie_rate(m, box, iso, qd);
  const double shear = lib.branch_rates[0] + lib.branch_rates[1];
  double basis_err = 0.0;
  for (double mix : {0.0, 0.4, 1.1, 2.9})
    basis_err = std::max(basis_err, rel(mixed_shear_rate(m, box[0], iso, mix, 32, 64), shear));

  const double rot_err = rotation_oracle_error();

  // Byte-identical CSV from two runs of the same config.
  const fs::path dir = fs::temp_directory_path() / "phonoscat_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = fs::path(PHONOSCAT_CONFIG_DIR) / "mie_waveguide_height.json";
  bool identical = true;
  std::string first;
  for (int run = 0; run < 2; ++run) {
    app::RunOptions opts;
    opts.out = dir / ("repeat_" + std::to_string(run) + ".csv");
    opts.threads = run == 0 ? 1u : 2u;
    std::ostringstream out, err;
    if (app::run_command(cfg, opts, out, err) != app::kExitOk) identical = false;
    const std::string text = slurp(*opts.out);
    if (run == 0) first = text;
    else identical = identical && !text.empty() && text == first;
  }
  fs::remove_all(dir);

  const double dt = seconds_since(t0);
  return {vt_err < 1e-10 && basis_err < 1e-9 && rot_err < 1e-9 && identical && dt < 300.0,
          fmt("V_T %.1e (< 1e-10), degenerate basis %.1e (< 1e-9), rotation oracles %.1e (< 1e-9), "
              "repeat CSV byte-identical: %s, %.1f s (< 300 s)",
              vt_err, basis_err, rot_err, identical ? "yes" : "no", dt)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"Rayleigh frequency scaling", frequency_scaling},
      {"Rayleigh size scaling", size_scaling},
      {"Mie to Rayleigh limit", mie_rayleigh_limit},
      {"Oracle equivalence", oracle_equivalence},
      {"Mie oscillation", mie_oscillation},
      {"Dual-waveguide suppression", dual_suppression},
      {"Bragg mirror", bragg_mirror},
      {"Figure-of-merit invariance", eta_invariance},
      {"Order-of-magnitude anchors", anchors},
      {"Property suites", property_suites},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].name << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
