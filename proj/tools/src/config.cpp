#include "phonoscat_app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

namespace phonoscat::app {

namespace {

using nlohmann::json;

constexpr double kUm = 1e-6;
constexpr double kUm3 = 1e-18;
constexpr double kGHz = 1e9;

// A JSON value together with its dotted path, so that every error message
// can name the field it is about.
class Node {
 public:
  Node(const json& value, std::string path) : v_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return v_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_, msg); }

  bool has(const char* key) const { return v_.contains(key); }

  Node at(const char* key) const {
    if (!v_.contains(key)) throw ConfigError(child_path(key), "required field is missing");
    return Node(v_.at(key), child_path(key));
  }

  std::optional<Node> get(const char* key) const {
    if (!v_.contains(key)) return std::nullopt;
    return Node(v_.at(key), child_path(key));
  }

  Node operator[](std::size_t i) const {
    return Node(v_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  void require_object() const {
    if (!v_.is_object()) fail("must be an object");
  }

  void allow_keys(std::initializer_list<const char*> keys) const {
    require_object();
    for (const auto& [key, value] : v_.items()) {
      (void)value;
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
        throw ConfigError(child_path(key.c_str()), "unknown field");
    }
  }

  std::size_t array_size() const {
    if (!v_.is_array()) fail("must be an array");
    return v_.size();
  }

  double number() const {
    if (!v_.is_number()) fail("must be a number");
    const double x = v_.get<double>();
    if (!std::isfinite(x)) fail("must be finite");
    return x;
  }

  double positive() const {
    const double x = number();
    if (!(x > 0.0)) fail("must be > 0 (got " + v_.dump() + ")");
    return x;
  }

  double non_negative() const {
    const double x = number();
    if (x < 0.0) fail("must be >= 0 (got " + v_.dump() + ")");
    return x;
  }

  std::size_t count(std::size_t min_value) const {
    if (!v_.is_number_integer() || v_.get<long long>() < static_cast<long long>(min_value))
      fail("must be an integer >= " + std::to_string(min_value));
    return static_cast<std::size_t>(v_.get<long long>());
  }

  std::string string() const {
    if (!v_.is_string()) fail("must be a string");
    return v_.get<std::string>();
  }

  bool boolean() const {
    if (!v_.is_boolean()) fail("must be true or false");
    return v_.get<bool>();
  }

  Vec3 vec3() const {
    if (!v_.is_array() || v_.size() != 3) fail("must be an array of 3 numbers");
    return {(*this)[0].number(), (*this)[1].number(), (*this)[2].number()};
  }

  Vec3 unit_vector() const {
    const Vec3 v = vec3();
    if (norm(v) == 0.0) fail("must not be the zero vector");
    return normalized(v);
  }

 private:
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& v_;
  std::string path_;
};

Scenario parse_scenario(const Node& n) {
  const std::string s = n.string();
  if (s == "rayleigh") return Scenario::Rayleigh;
  if (s == "mie") return Scenario::Mie;
  if (s == "dual_waveguide") return Scenario::DualWaveguide;
  if (s == "bragg") return Scenario::Bragg;
  if (s == "figure_of_merit") return Scenario::FigureOfMerit;
  if (s == "orientation") return Scenario::Orientation;
  if (s == "oracle_check") return Scenario::OracleCheck;
  n.fail("unknown scenario '" + s +
         "' (expected rayleigh, mie, dual_waveguide, bragg, figure_of_merit, "
         "orientation or oracle_check)");
}

// One rotation: {"matrix": [[..],[..],[..]]} or {"axis": [x,y,z], "angle_deg": a}.
Orientation parse_single_rotation(const Node& n) {
  n.allow_keys({"matrix", "axis", "angle_deg"});
  if (n.has("matrix")) {
    if (n.has("axis") || n.has("angle_deg")) n.fail("give either matrix or axis/angle_deg");
    const Node m = n.at("matrix");
    if (m.array_size() != 3) m.fail("must be a 3x3 array");
    Mat3 r{};
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec3 row = m[i].vec3();
      for (std::size_t j = 0; j < 3; ++j) r[i][j] = row[j];
    }
    try {
      return Orientation(r);
    } catch (const ValidationError& e) {
      m.fail(e.what());
    }
  }
  const Vec3 axis = n.at("axis").unit_vector();
  const double angle = n.at("angle_deg").number();
  return Orientation::about(axis, angle * kPi / 180.0);
}

// A rotation or a list of rotations applied in order (first entry first).
Orientation parse_orientation(const Node& n) {
  if (n.raw().is_array()) {
    Orientation total;
    for (std::size_t i = 0; i < n.array_size(); ++i)
      total = parse_single_rotation(n[i]).compose(total);
    return total;
  }
  return parse_single_rotation(n);
}

InclusionConfig parse_inclusion(const Node& n) {
  n.allow_keys({"material", "size_um", "center_um", "axes", "crystal", "sign"});
  InclusionConfig out;
  out.material = n.at("material").string();
  const Node size = n.at("size_um");
  const Vec3 s = size.vec3();
  static const char* const kEdge[] = {"length", "width", "thickness"};
  for (std::size_t i = 0; i < 3; ++i)
    if (!(s[i] > 0.0))
      size[i].fail(std::string("inclusion ") + kEdge[i] + " must be > 0 (got " +
                   size[i].raw().dump() + ")");
  out.geometry.size = kUm * s;
  if (auto c = n.get("center_um")) out.geometry.center = kUm * c->vec3();
  if (auto a = n.get("axes")) out.geometry.axes = parse_orientation(*a);
  if (auto c = n.get("crystal")) out.geometry.crystal = parse_orientation(*c);
  if (auto s2 = n.get("sign")) {
    const double sign = s2->number();
    if (sign != 1.0 && sign != -1.0) s2->fail("must be +1 or -1");
    out.geometry.sign = static_cast<int>(sign);
  }
  return out;
}

void parse_mode(const Node& n, RunConfig& cfg) {
  n.allow_keys({"frequency_GHz", "mode_volume_um3", "field_direction", "eps_eff"});
  cfg.mode.omega = 2.0 * kPi * kGHz * n.at("frequency_GHz").positive();
  cfg.mode.mode_volume = kUm3 * n.at("mode_volume_um3").positive();
  if (auto f = n.get("field_direction")) cfg.mode.field_direction = f->unit_vector();
  if (auto e = n.get("eps_eff")) {
    cfg.mode.eps_eff = e->positive();
    cfg.eps_from_substrate = false;
  }
}

std::vector<double> parse_grid(const Node& n, bool integer) {
  if (n.has("values")) {
    if (n.has("min") || n.has("max") || n.has("count") || n.has("grid"))
      n.fail("give either values or grid/min/max/count");
    const Node v = n.at("values");
    const std::size_t size = v.array_size();
    if (size == 0) v.fail("sweep grid is empty");
    std::vector<double> out;
    for (std::size_t i = 0; i < size; ++i) out.push_back(v[i].number());
    return out;
  }
  const std::string kind = n.has("grid") ? n.at("grid").string() : "linear";
  const double lo = n.at("min").number();
  const double hi = n.at("max").number();
  const std::size_t count = n.at("count").count(1);
  if (hi < lo) n.at("max").fail("must be >= min");
  if (kind == "linear") {
    std::vector<double> g = linear_grid(lo, hi, count);
    if (integer)
      for (double& x : g) x = std::round(x);
    return g;
  }
  if (kind == "log") {
    if (!(lo > 0.0)) n.at("min").fail("log grid bounds must be > 0");
    return log_grid(lo, hi, count);
  }
  n.at("grid").fail("must be 'linear' or 'log'");
}

void parse_sweep(const Node& n, RunConfig& cfg) {
  n.allow_keys({"parameter", "grid", "min", "max", "count", "values", "fit_range", "aspect",
                "direction"});
  const Node p = n.at("parameter");
  cfg.sweep.parameter = p.string();
  const auto allowed = sweep_parameters(cfg.scenario);
  if (std::find(allowed.begin(), allowed.end(), cfg.sweep.parameter) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    p.fail("'" + cfg.sweep.parameter + "' is not a sweep parameter of scenario " +
           to_string(cfg.scenario) + " (allowed: " + list + ")");
  }
  const std::string& name = cfg.sweep.parameter;
  cfg.sweep.values = parse_grid(n, name == "periods");

  const bool needs_positive = name != "angle_deg" && name != "separation_um" && name != "periods";
  for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
    const double x = cfg.sweep.values[i];
    // Outside a values list a bad point can only come from a bad lower bound.
    const std::string where = n.has("values") ? "sweep.values[" + std::to_string(i) + "]"
                                              : "sweep.min";
    if (needs_positive && !(x > 0.0))
      throw ConfigError(where, name + " must be > 0 (got " + std::to_string(x) + ")");
    if (!needs_positive && name != "angle_deg" && x < 0.0)
      throw ConfigError(where, name + " must be >= 0 (got " + std::to_string(x) + ")");
    if (name == "periods" && x != std::round(x))
      throw ConfigError(where, "periods must be whole numbers");
  }

  if (auto f = n.get("fit_range")) {
    if (f->array_size() != 2) f->fail("must be [lo, hi]");
    const double lo = (*f)[0].number();
    const double hi = (*f)[1].number();
    if (!(hi > lo)) f->fail("hi must exceed lo");
    cfg.sweep.fit = FitRange{lo, hi};
  }
  if (auto a = n.get("aspect")) cfg.sweep.aspect = a->positive();
  if (auto d = n.get("direction")) cfg.sweep.direction = d->unit_vector();
}

void parse_quadrature(const Node& n, RunConfig& cfg) {
  n.allow_keys({"polar", "azimuth", "tolerance", "check_convergence", "max_polar", "threads"});
  if (auto p = n.get("polar")) cfg.quadrature.polar = p->count(2);
  if (auto a = n.get("azimuth")) cfg.quadrature.azimuth = a->count(2);
  if (auto t = n.get("tolerance")) cfg.quadrature.tolerance = t->positive();
  if (auto c = n.get("check_convergence")) cfg.quadrature.check_convergence = c->boolean();
  if (auto m = n.get("max_polar")) cfg.refine.max_polar = m->count(2);
  if (auto t = n.get("threads")) cfg.quadrature.threads = static_cast<unsigned>(t->count(1));
}

void parse_dual(const Node& n, RunConfig& cfg) {
  n.allow_keys({"separation_um", "relative_sign"});
  if (auto s = n.get("separation_um")) cfg.dual.separation = kUm * s->vec3();
  if (auto r = n.get("relative_sign")) {
    const double v = r->number();
    if (v != 1.0 && v != -1.0) r->fail("must be +1 or -1");
    cfg.dual.relative_sign = static_cast<int>(v);
  }
}

void parse_bragg(const Node& n, RunConfig& cfg) {
  n.allow_keys({"layers", "normal", "center_GHz", "periods", "incident", "exit"});
  const Node layers = n.at("layers");
  if (layers.array_size() == 0) layers.fail("needs at least one layer");
  for (std::size_t i = 0; i < layers.array_size(); ++i) {
    const Node l = layers[i];
    l.allow_keys({"material", "impedance", "velocity", "thickness_um"});
    BraggLayerConfig lc;
    if (l.has("material")) {
      if (l.has("impedance") || l.has("velocity") || l.has("thickness_um"))
        l.fail("give either material or impedance/velocity/thickness_um");
      lc.material = l.at("material").string();
    } else {
      BraggLayer b;
      b.impedance = l.at("impedance").positive();
      b.velocity = l.at("velocity").positive();
      b.thickness = kUm * l.at("thickness_um").positive();
      lc.explicit_layer = b;
    }
    cfg.bragg.layers.push_back(std::move(lc));
  }
  if (auto v = n.get("normal")) cfg.bragg.normal = v->unit_vector();
  if (auto c = n.get("center_GHz")) cfg.bragg.center_omega = 2.0 * kPi * kGHz * c->positive();
  if (auto p = n.get("periods")) cfg.bragg.periods = p->count(0);
  if (auto i = n.get("incident")) cfg.bragg.incident = i->string();
  if (auto e = n.get("exit")) cfg.bragg.exit = e->string();
}

void parse_eo(const Node& n, RunConfig& cfg) {
  n.allow_keys({"g0_Hz", "reference_volume_um3", "overlap", "overlap_model"});
  cfg.eo.reference_coupling = 2.0 * kPi * n.at("g0_Hz").positive();
  if (auto v = n.get("reference_volume_um3")) cfg.eo.reference_volume = kUm3 * v->positive();
  if (auto o = n.get("overlap")) {
    cfg.eo.overlap = o->non_negative();
    if (cfg.eo.overlap > 1.0) o->fail("must lie in [0, 1]");
  }
  if (auto m = n.get("overlap_model")) {
    if (n.has("overlap")) m->fail("give either overlap or overlap_model");
    m->allow_keys({"optical_wavelength_um", "numerical_aperture", "scale"});
    OverlapModelConfig om;
    if (auto w = m->get("optical_wavelength_um")) om.optical_wavelength = kUm * w->positive();
    if (auto a = m->get("numerical_aperture")) om.numerical_aperture = a->positive();
    if (auto s = m->get("scale")) {
      om.scale = s->non_negative();
      if (om.scale > 1.0) s->fail("must lie in [0, 1]");
    }
    cfg.eo.overlap_model = om;
  }
}

void parse_oracle(const Node& n, RunConfig& cfg) {
  n.allow_keys({"sigma_fraction", "polar", "azimuth", "window", "cells_per_sigma", "limit"});
  if (auto s = n.get("sigma_fraction")) {
    const double f = s->positive();
    if (f > 0.1) s->fail("must be <= 0.1 (the broadening has to stay narrow)");
    cfg.oracle.sigma_fraction = f;
  }
  if (auto p = n.get("polar")) cfg.oracle.brute.polar = p->count(2);
  if (auto a = n.get("azimuth")) cfg.oracle.brute.azimuth = a->count(2);
  if (auto w = n.get("window")) cfg.oracle.brute.window = w->positive();
  if (auto c = n.get("cells_per_sigma")) cfg.oracle.brute.cells_per_sigma = c->positive();
  if (auto l = n.get("limit")) cfg.oracle.limit = l->positive();
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Rayleigh: return "rayleigh";
    case Scenario::Mie: return "mie";
    case Scenario::DualWaveguide: return "dual_waveguide";
    case Scenario::Bragg: return "bragg";
    case Scenario::FigureOfMerit: return "figure_of_merit";
    case Scenario::Orientation: return "orientation";
    case Scenario::OracleCheck: return "oracle_check";
  }
  return "unknown";
}

std::vector<std::string> sweep_parameters(Scenario s) {
  const std::vector<std::string> geometric{"frequency_GHz", "mode_volume_um3", "height_um",
                                           "thickness_um", "length_um"};
  switch (s) {
    case Scenario::Rayleigh:
    case Scenario::Mie:
    case Scenario::FigureOfMerit:
    case Scenario::OracleCheck:
      return geometric;
    case Scenario::DualWaveguide: {
      auto v = geometric;
      v.push_back("separation_um");
      return v;
    }
    case Scenario::Bragg: return {"periods", "frequency_GHz"};
    case Scenario::Orientation: return {"angle_deg"};
  }
  return {};
}

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "at line L, column C" in the message.
    throw ConfigError("<config>", std::string("invalid JSON: ") + e.what());
  }
  const Node top(root, "");
  if (!root.is_object()) throw ConfigError("<config>", "top level must be a JSON object");
  top.allow_keys({"scenario", "materials", "substrate", "mode", "inclusions", "sweep",
                  "quadrature", "method", "dual", "bragg", "eo", "orientation", "oracle",
                  "output"});

  RunConfig cfg;
  cfg.scenario = parse_scenario(top.at("scenario"));
  if (auto m = top.get("materials")) {
    std::filesystem::path p = m->string();
    cfg.materials = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  cfg.substrate = top.at("substrate").string();
  parse_mode(top.at("mode"), cfg);

  const Node incs = top.at("inclusions");
  const std::size_t n_inc = incs.array_size();
  if (n_inc == 0) incs.fail("needs at least one inclusion");
  for (std::size_t i = 0; i < n_inc; ++i) cfg.inclusions.push_back(parse_inclusion(incs[i]));

  parse_sweep(top.at("sweep"), cfg);
  if (auto q = top.get("quadrature")) parse_quadrature(*q, cfg);
  if (cfg.refine.max_polar < cfg.quadrature.polar)
    throw ConfigError("quadrature.max_polar", "must be >= quadrature.polar");

  if (auto m = top.get("method")) {
    const std::string s = m->string();
    if (s == "mie") cfg.method = RateMethod::Mie;
    else if (s == "rayleigh") cfg.method = RateMethod::Rayleigh;
    else m->fail("must be 'mie' or 'rayleigh'");
  }
  if (cfg.scenario == Scenario::Rayleigh) cfg.method = RateMethod::Rayleigh;
  if (cfg.method == RateMethod::Rayleigh && cfg.inclusions.size() > 1)
    throw ConfigError("inclusions", "the rayleigh method handles a single inclusion");
  if (cfg.scenario == Scenario::DualWaveguide && cfg.inclusions.size() != 1)
    throw ConfigError("inclusions", "dual_waveguide takes exactly one inclusion to duplicate");

  if (auto d = top.get("dual")) parse_dual(*d, cfg);
  if (cfg.scenario == Scenario::Bragg) parse_bragg(top.at("bragg"), cfg);
  if (cfg.scenario == Scenario::FigureOfMerit) parse_eo(top.at("eo"), cfg);
  if (auto o = top.get("orientation")) {
    o->allow_keys({"axis"});
    cfg.rotation_axis = o->at("axis").unit_vector();
  }
  if (auto o = top.get("oracle")) parse_oracle(*o, cfg);
  if (auto o = top.get("output")) {
    std::filesystem::path p = o->string();
    cfg.output = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    // Whole-document problems are reported against the file itself.
    if (e.field() != "<config>") throw;
    throw ConfigError(path.string(), std::string(e.what()).substr(e.field().size() + 2));
  }
}

}  // namespace phonoscat::app
