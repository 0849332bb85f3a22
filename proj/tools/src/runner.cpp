#include "phonoscat_app/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace phonoscat::app {

namespace {

constexpr double kUm = 1e-6;
constexpr double kGHz = 1e9;

const char* column_name(const std::string& parameter) {
  if (parameter == "frequency_GHz") return "f_GHz";
  if (parameter == "mode_volume_um3") return "V_E_um3";
  if (parameter == "height_um") return "h_um";
  if (parameter == "thickness_um") return "t_um";
  if (parameter == "length_um") return "L_um";
  if (parameter == "separation_um") return "d_um";
  if (parameter == "periods") return "n";
  return "angle_deg";
}

// Parameters for which a log-log slope of Q is meaningful.
bool is_scaling_parameter(const std::string& p) {
  return p == "frequency_GHz" || p == "mode_volume_um3" || p == "height_um" ||
         p == "thickness_um" || p == "length_um";
}

struct Device {
  MicrowaveMode mode;
  std::vector<Inclusion> incs;
};

// Applies one sweep value (config units) to a copy of the device.
Device at_value(const Device& base, const SweepSpec& sweep, double x) {
  Device d = base;
  const std::string& p = sweep.parameter;
  if (p == "frequency_GHz") d.mode.omega = 2.0 * kPi * kGHz * x;
  else if (p == "mode_volume_um3") d.mode.mode_volume = 1e-18 * x;
  else if (p == "height_um") set_waveguide_height(d.incs, kUm * x, sweep.aspect);
  else if (p == "thickness_um") set_film_thickness(d.incs, kUm * x);
  else if (p == "length_um")
    for (auto& inc : d.incs) inc.size[0] = kUm * x;
  return d;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, const MaterialDatabase& db) : cfg_(cfg), db_(db) {
    substrate_ = lookup(cfg.substrate, "substrate");
    base_.mode = cfg.mode;
    if (cfg.eps_from_substrate) base_.mode.eps_eff = substrate_.mean_relative_permittivity();
    for (std::size_t i = 0; i < cfg.inclusions.size(); ++i) {
      Inclusion inc = cfg.inclusions[i].geometry;
      inc.material = lookup(cfg.inclusions[i].material,
                            "inclusions[" + std::to_string(i) + "].material");
      base_.incs.push_back(std::move(inc));
    }
    if (cfg.method == RateMethod::Rayleigh && !is_isotropic(substrate_.stiffness))
      throw ConfigError("substrate", "'" + substrate_.name +
                                         "' is anisotropic; the rayleigh method needs an "
                                         "isotropic substrate (use scenario mie)");
  }

  RunOutput run() {
    switch (cfg_.scenario) {
      case Scenario::Rayleigh:
      case Scenario::Mie: radiation(); break;
      case Scenario::DualWaveguide: dual(); break;
      case Scenario::Bragg: bragg(); break;
      case Scenario::FigureOfMerit: merit(); break;
      case Scenario::Orientation: orientation(); break;
      case Scenario::OracleCheck: oracle(); break;
    }
    out_.report = header() + report_.str();
    return std::move(out_);
  }

 private:
  MaterialSpec lookup(const std::string& name, const std::string& field) const {
    if (const MaterialSpec* m = db_.find(name)) return *m;
    throw ConfigError(field, "unknown material '" + name + "'");
  }

  RadiationResult rate(const MicrowaveMode& mode, std::span<const Inclusion> incs) {
    RadiationResult r;
    if (cfg_.method == RateMethod::Rayleigh) {
      r = rayleigh_rate(mode, incs[0], substrate_);
    } else {
      r = converged_mie_rate(mode, incs, substrate_, cfg_.quadrature, cfg_.refine.max_polar);
      max_nodes_ = std::max(max_nodes_, r.diagnostics.nodes);
      max_error_ = std::max(max_error_, r.diagnostics.estimated_rel_error);
      used_quadrature_ = true;
    }
    ++regime_rows_;
    if (r.regime == Regime::Rayleigh) ++rayleigh_rows_;
    return r;
  }

  void begin_table(std::vector<std::string> extra) {
    out_.table.columns = {column_name(cfg_.sweep.parameter)};
    for (auto& c : extra) out_.table.columns.push_back(std::move(c));
  }

  void add_row(double x, std::initializer_list<double> values,
               std::initializer_list<std::string> text = {}) {
    std::vector<std::string> row{format_number(x)};
    for (double v : values) row.push_back(format_number(v));
    for (const auto& t : text) row.push_back(t);
    out_.table.rows.push_back(std::move(row));
  }

  void report_slope(const std::string& what, const std::vector<double>& x,
                    const std::vector<double>& y, const std::vector<bool>& rayleigh) {
    const FitRange range = cfg_.sweep.fit.value_or(FitRange{});
    auto describe = [&](const std::vector<double>& xs, const std::vector<double>& ys,
                        FitRange r) {
      try {
        std::ostringstream s;
        s << std::setprecision(6) << loglog_slope(xs, ys, r);
        return s.str();
      } catch (const ValidationError& e) {
        return std::string("n/a (") + e.what() + ")";
      }
    };
    report_ << what << " slope vs " << cfg_.sweep.parameter;
    if (cfg_.sweep.fit) report_ << " over [" << range.lo << ", " << range.hi << "]";
    report_ << ": " << describe(x, y, range) << "\n";

    std::vector<double> rx, ry;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (rayleigh[i]) {
        rx.push_back(x[i]);
        ry.push_back(y[i]);
      }
    if (!rx.empty() && rx.size() != x.size())
      report_ << what << " slope over the " << rx.size()
              << " Rayleigh-tagged rows: " << describe(rx, ry, FitRange{}) << "\n";
  }

  void report_cg(const RadiationResult& r, double x) {
    report_ << "derived C*G per branch at " << cfg_.sweep.parameter << " = " << x << ": "
            << format_number(r.cg_equivalent[0]) << ", " << format_number(r.cg_equivalent[1])
            << ", " << format_number(r.cg_equivalent[2]) << "\n";
  }

  std::string header() const {
    std::ostringstream h;
    h << "scenario: " << to_string(cfg_.scenario) << "\n";
    h << "substrate: " << substrate_.name
      << (is_isotropic(substrate_.stiffness) ? " (isotropic)" : " (anisotropic)") << "\n";
    h << "method: " << (cfg_.method == RateMethod::Rayleigh ? "rayleigh" : "mie") << "\n";
    h << "eps_eff: " << format_number(base_.mode.eps_eff)
      << (cfg_.eps_from_substrate ? " (substrate mean)" : "") << "\n";
    h << "rows: " << out_.table.rows.size() << "\n";
    h << "regime: " << rayleigh_rows_ << " of " << regime_rows_ << " evaluations tagged rayleigh"
      << " (max kL < " << kRegimeThreshold << ")\n";
    if (used_quadrature_)
      h << "quadrature: up to " << max_nodes_ << " direction nodes, max estimated relative error "
        << format_number(max_error_) << " (tolerance " << cfg_.quadrature.tolerance << ")\n";
    return h.str();
  }

  // ---- scenarios ----------------------------------------------------------

  void radiation() {
    if (cfg_.scenario == Scenario::Rayleigh)
      begin_table({"Gamma_rad_s", "Q", "regime"});
    else
      begin_table({"Gamma_rad_s", "Q", "regime", "Gamma_b0_rad_s", "Gamma_b1_rad_s",
                   "Gamma_b2_rad_s", "max_kL", "quad_nodes", "quad_rel_err"});
    std::vector<double> xs, qs;
    std::vector<bool> tags;
    for (double x : cfg_.sweep.values) {
      const Device d = at_value(base_, cfg_.sweep, x);
      const RadiationResult r = rate(d.mode, d.incs);
      add_row(x, {r.total_rate, r.quality}, {to_string(r.regime)});
      if (cfg_.scenario == Scenario::Mie) {
        auto& row = out_.table.rows.back();
        for (double v : {r.branch_rates[0], r.branch_rates[1], r.branch_rates[2], r.max_kl,
                         static_cast<double>(r.diagnostics.nodes),
                         r.diagnostics.estimated_rel_error})
          row.push_back(format_number(v));
      }
      xs.push_back(x);
      qs.push_back(r.quality);
      tags.push_back(r.regime == Regime::Rayleigh);
      if (xs.size() == 1) report_cg(r, x);
    }
    if (is_scaling_parameter(cfg_.sweep.parameter)) report_slope("Q", xs, qs, tags);
    report_extrema(xs, qs);
  }

  void report_extrema(const std::vector<double>& xs, const std::vector<double>& qs) {
    std::size_t maxima = 0, minima = 0;
    for (std::size_t i = 1; i + 1 < qs.size(); ++i) {
      if (qs[i] > qs[i - 1] && qs[i] > qs[i + 1]) ++maxima;
      if (qs[i] < qs[i - 1] && qs[i] < qs[i + 1]) ++minima;
    }
    const auto [lo, hi] = std::minmax_element(qs.begin(), qs.end());
    report_ << "Q range: " << format_number(*lo) << " at " << cfg_.sweep.parameter << " = "
            << xs[static_cast<std::size_t>(lo - qs.begin())] << ", " << format_number(*hi)
            << " at " << xs[static_cast<std::size_t>(hi - qs.begin())] << "\n";
    report_ << "interior local maxima / minima of Q: " << maxima << " / " << minima << "\n";
  }

  void dual() {
    begin_table({"Gamma_pair_rad_s", "Gamma_single_rad_s", "suppression", "Q_pair", "Q_single",
                 "Q_gain", "kd"});
    const bool sweep_sep = cfg_.sweep.parameter == "separation_um";
    std::vector<double> xs, ratios;
    std::vector<bool> small;
    double best_gain = 0.0;
    for (double x : cfg_.sweep.values) {
      const Device d = at_value(base_, cfg_.sweep, x);
      const Vec3 sep = sweep_sep ? (kUm * x) * cfg_.sweep.direction : cfg_.dual.separation;
      std::array<Inclusion, 2> pair;
      try {
        pair = dual_pair(d.incs[0], sep, cfg_.dual.relative_sign);
      } catch (const ValidationError& e) {
        throw ConfigError(sweep_sep ? "sweep" : "dual.separation_um", e.what());
      }
      const RadiationResult p = rate(d.mode, pair);
      const RadiationResult s = rate(d.mode, d.incs);
      const double ratio = s.total_rate > 0.0 ? p.total_rate / (2.0 * s.total_rate) : 0.0;
      const double gain = p.total_rate > 0.0 ? s.total_rate / p.total_rate
                                             : std::numeric_limits<double>::infinity();
      const double lmax = std::max({d.incs[0].size[0], d.incs[0].size[1], d.incs[0].size[2]});
      const double kd = s.max_kl / lmax * norm(sep);
      add_row(x, {p.total_rate, s.total_rate, ratio, p.quality, s.quality, gain, kd});
      best_gain = std::max(best_gain, gain);
      xs.push_back(x);
      ratios.push_back(ratio);
      small.push_back(kd < 0.3);
    }
    report_ << "relative sign: " << cfg_.dual.relative_sign << "\n";
    report_ << "largest Q gain: " << format_number(best_gain) << "\n";
    if (sweep_sep) report_slope("suppression", xs, ratios, small);
  }

  BraggStack make_stack(double center_omega) const {
    BraggStack s;
    for (std::size_t i = 0; i < cfg_.bragg.layers.size(); ++i) {
      const auto& l = cfg_.bragg.layers[i];
      if (l.explicit_layer) {
        s.period.push_back(*l.explicit_layer);
      } else {
        const MaterialSpec m = lookup(l.material, "bragg.layers[" + std::to_string(i) + "].material");
        s.period.push_back(quarter_wave_layer(m, cfg_.bragg.normal, center_omega));
      }
    }
    const MaterialSpec in = cfg_.bragg.incident.empty() ? substrate_
                                                        : lookup(cfg_.bragg.incident, "bragg.incident");
    const MaterialSpec ex = cfg_.bragg.exit.empty() ? substrate_ : lookup(cfg_.bragg.exit, "bragg.exit");
    s.incident_impedance = longitudinal_impedance(in, cfg_.bragg.normal);
    s.exit_impedance = longitudinal_impedance(ex, cfg_.bragg.normal);
    s.periods = cfg_.bragg.periods;
    return s;
  }

  void bragg() {
    begin_table({"R", "T", "Gamma_bare_rad_s", "Gamma_rad_s", "Q_bare", "Q", "Q_gain"});
    const double center = cfg_.bragg.center_omega > 0.0 ? cfg_.bragg.center_omega : base_.mode.omega;
    BraggStack stack = make_stack(center);
    const bool sweep_n = cfg_.sweep.parameter == "periods";
    std::optional<RadiationResult> fixed;
    double last_t = 2.0;
    bool decreasing = true;
    double best_gain = 0.0;
    for (double x : cfg_.sweep.values) {
      Device d = base_;
      if (sweep_n) {
        stack.periods = static_cast<std::size_t>(x);
        if (!fixed) fixed = rate(d.mode, d.incs);
      } else {
        d = at_value(base_, cfg_.sweep, x);
      }
      RadiationResult bare;
      if (sweep_n) {
        bare = *fixed;
      } else {
        bare = rate(d.mode, d.incs);
      }
      const BraggResponse resp = bragg_transmission(stack, d.mode.omega);
      const RadiationResult cut = mitigated_rate(bare, stack, d.mode.omega);
      const double gain = cut.total_rate > 0.0 ? bare.total_rate / cut.total_rate
                                               : std::numeric_limits<double>::infinity();
      add_row(x, {resp.reflectance, resp.transmittance, bare.total_rate, cut.total_rate,
                  bare.quality, cut.quality, gain});
      if (resp.transmittance >= last_t) decreasing = false;
      last_t = resp.transmittance;
      best_gain = std::max(best_gain, gain);
    }
    report_ << "stack: " << stack.period.size() << " layers per period, centre "
            << format_number(center / (2.0 * kPi * kGHz)) << " GHz, Z_in "
            << format_number(stack.incident_impedance) << ", Z_out "
            << format_number(stack.exit_impedance) << " Pa s/m\n";
    report_ << "model: Gamma' = Gamma * T(w0), a normal-incidence approximation of the "
               "mirror's effect on the phonon continuum\n";
    if (sweep_n)
      report_ << "transmittance strictly decreasing in n: " << (decreasing ? "yes" : "no") << "\n";
    report_ << "largest Q gain: " << format_number(best_gain) << "\n";
  }

  void merit() {
    begin_table({"g_MO_Hz", "xi", "Gamma_rad_s", "Q", "eta_Hz2", "regime"});
    std::vector<double> xs, etas;
    for (double x : cfg_.sweep.values) {
      const Device d = at_value(base_, cfg_.sweep, x);
      EoModel eo;
      eo.reference_coupling = cfg_.eo.reference_coupling;
      eo.reference_volume =
          cfg_.eo.reference_volume > 0.0 ? cfg_.eo.reference_volume : base_.mode.mode_volume;
      eo.overlap = cfg_.eo.overlap;
      if (const auto& om = cfg_.eo.overlap_model) {
        const Inclusion& guide = d.incs[0];
        eo.overlap = om->scale * confinement_overlap(guide.size[2], guide.size[1] / guide.size[2],
                                                     om->optical_wavelength,
                                                     om->numerical_aperture);
      }
      const RadiationResult r = rate(d.mode, d.incs);
      const double eta = figure_of_merit(eo, d.mode, r);
      add_row(x, {eo.coupling(d.mode.mode_volume) / (2.0 * kPi), eo.overlap, r.total_rate,
                  r.quality, eta},
              {to_string(r.regime)});
      xs.push_back(x);
      etas.push_back(eta);
    }
    const auto [lo, hi] = std::minmax_element(etas.begin(), etas.end());
    const std::size_t peak = static_cast<std::size_t>(hi - etas.begin());
    report_ << "peak eta: " << format_number(*hi) << " Hz^2 at " << cfg_.sweep.parameter << " = "
            << xs[peak] << "\n";
    report_ << "eta spread (max/min - 1): " << format_number(*hi / *lo - 1.0) << "\n";
  }

  void orientation() {
    begin_table({"G", "Gamma_rad_s", "Q", "regime"});
    std::vector<double> qs;
    for (double x : cfg_.sweep.values) {
      const Orientation turn = Orientation::about(cfg_.rotation_axis, x * kPi / 180.0);
      std::vector<Inclusion> turned = base_.incs;
      for (auto& inc : turned) inc.crystal = turn.compose(inc.crystal);
      const double g = mean_geometry_factor(base_.mode.field_direction, turned[0].lab_piezo(),
                                            substrate_);
      const RadiationResult r = rate(base_.mode, turned);
      add_row(x, {g, r.total_rate, r.quality}, {to_string(r.regime)});
      qs.push_back(r.quality);
    }
    report_extrema(cfg_.sweep.values, qs);
    const auto [lo, hi] = std::minmax_element(qs.begin(), qs.end());
    report_ << "max/min Q over angles: " << format_number(*hi / *lo) << "\n";
  }

  void oracle() {
    begin_table({"Gamma_mie_rad_s", "Gamma_brute_rad_s", "rel_dev", "regime"});
    double worst = 0.0;
    for (double x : cfg_.sweep.values) {
      const Device d = at_value(base_, cfg_.sweep, x);
      const RadiationResult m =
          converged_mie_rate(d.mode, d.incs, substrate_, cfg_.quadrature, cfg_.refine.max_polar);
      max_nodes_ = std::max(max_nodes_, m.diagnostics.nodes);
      max_error_ = std::max(max_error_, m.diagnostics.estimated_rel_error);
      used_quadrature_ = true;
      ++regime_rows_;
      if (m.regime == Regime::Rayleigh) ++rayleigh_rows_;
      BruteForceSpec spec = cfg_.oracle.brute;
      spec.sigma = cfg_.oracle.sigma_fraction * d.mode.omega;
      spec.threads = cfg_.quadrature.threads;
      const double b = brute_force_rate(d.mode, d.incs, substrate_, spec);
      const double dev = m.total_rate > 0.0 ? std::abs(b - m.total_rate) / m.total_rate : 0.0;
      worst = std::max(worst, dev);
      add_row(x, {m.total_rate, b, dev}, {to_string(m.regime)});
    }
    std::ostringstream line;
    line << "oracle_check: max mie-vs-brute-force relative deviation = " << std::setprecision(4)
         << 100.0 * worst << "% (limit " << 100.0 * cfg_.oracle.limit << "%, sigma = w0 * "
         << cfg_.oracle.sigma_fraction << ") " << (worst < cfg_.oracle.limit ? "PASS" : "FAIL");
    report_ << line.str() << "\n";
    if (!(worst < cfg_.oracle.limit)) out_.check_failure = line.str();
  }

  const RunConfig& cfg_;
  const MaterialDatabase& db_;
  MaterialSpec substrate_;
  Device base_;
  RunOutput out_;
  std::ostringstream report_;
  std::size_t rayleigh_rows_ = 0;
  std::size_t regime_rows_ = 0;
  std::size_t max_nodes_ = 0;
  double max_error_ = 0.0;
  bool used_quadrature_ = false;
};

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

std::pair<std::size_t, std::size_t> parse_quad(const std::string& text) {
  const auto x = text.find('x');
  auto parse = [&](std::string_view s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 2)
      throw ConfigError("--quad", "expected NxM with integers >= 2, got '" + text + "'");
    return v;
  };
  if (x == std::string::npos)
    throw ConfigError("--quad", "expected NxM with integers >= 2, got '" + text + "'");
  const std::string_view sv(text);
  return {parse(sv.substr(0, x)), parse(sv.substr(x + 1))};
}

void apply_options(RunConfig& cfg, const RunOptions& opts) {
  if (opts.out) cfg.output = *opts.out;
  if (opts.threads) {
    if (*opts.threads == 0) throw ConfigError("--threads", "must be >= 1");
    cfg.quadrature.threads = *opts.threads;
  }
  if (opts.quad) {
    cfg.quadrature.polar = opts.quad->first;
    cfg.quadrature.azimuth = opts.quad->second;
    cfg.refine.max_polar = std::max(cfg.refine.max_polar, cfg.quadrature.polar);
  }
}

RadiationResult converged_mie_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                                   const MaterialSpec& substrate, QuadratureSpec quad,
                                   std::size_t max_polar) {
  const std::size_t cap = std::min(max_polar, kHardPolarCap);
  for (;;) {
    RadiationResult r = mie_rate(mode, incs, substrate, quad);
    if (!quad.check_convergence || r.diagnostics.converged) return r;
    if (2 * quad.polar > cap) {
      std::ostringstream msg;
      msg << "quadrature did not converge: estimated relative error "
          << r.diagnostics.estimated_rel_error << " > tolerance " << quad.tolerance << " at "
          << quad.polar << "x" << quad.azimuth << " nodes (cap " << cap
          << " polar nodes) for f = " << mode.omega / (2.0 * kPi * kGHz) << " GHz";
      throw NumericError(msg.str());
    }
    quad.polar *= 2;
    quad.azimuth *= 2;
  }
}

RunOutput execute(const RunConfig& cfg, const MaterialDatabase& db) {
  return Runner(cfg, db).run();
}

int run_command(const std::filesystem::path& config_path, const RunOptions& opts,
                std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_config(config_path);
    apply_options(cfg, opts);
    const MaterialDatabase db =
        load_materials(cfg.materials.empty() ? default_materials_path() : cfg.materials);
    const RunOutput result = execute(cfg, db);

    std::filesystem::path csv_path = cfg.output;
    if (csv_path.empty()) csv_path = std::filesystem::path(config_path).replace_extension(".csv");
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw ConfigError("output", "cannot write " + csv_path.string());
    csv << to_csv(result.table);
    csv.close();
    if (!csv) throw ConfigError("output", "failed while writing " + csv_path.string());

    out << result.report;
    out << "csv: " << csv_path.string() << " (" << result.table.rows.size() << " rows)\n";
    if (result.check_failure) {
      err << "phonoscat: check failed: " << *result.check_failure << "\n";
      return kExitNumeric;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "phonoscat: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "phonoscat: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "phonoscat: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "phonoscat: error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace phonoscat::app
