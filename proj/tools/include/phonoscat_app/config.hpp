#pragma once

// Run configuration for the phonoscat command-line tool.
//
// Configs are JSON. Frequencies are given in GHz and lengths in micrometers;
// everything is converted to SI here so the rest of the tool never sees
// config units except when echoing sweep values back into the CSV.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonoscat/errors.hpp"
#include "phonoscat/phonoscat.hpp"

namespace phonoscat::app {

/// A config problem. `what()` starts with the offending field path.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : ValidationError(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Scenario { Rayleigh, Mie, DualWaveguide, Bragg, FigureOfMerit, Orientation, OracleCheck };

std::string to_string(Scenario s);

/// The sweep axis. `values` stay in config units (GHz, um, degrees, ...).
struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  std::optional<FitRange> fit;  // config units
  double aspect = 2.0;          // width / height for height_um sweeps
  Vec3 direction{0.0, 1.0, 0.0};  // separation_um sweeps
};

struct InclusionConfig {
  std::string material;
  Inclusion geometry;  // material left empty until resolved
};

struct DualConfig {
  Vec3 separation{};  // m
  int relative_sign = -1;
};

struct BraggLayerConfig {
  std::string material;             // quarter-wave layer of this material, or
  std::optional<BraggLayer> explicit_layer;  // given impedance/velocity/thickness
};

struct BraggConfig {
  std::vector<BraggLayerConfig> layers;
  Vec3 normal{0.0, 0.0, 1.0};
  double center_omega = 0.0;  // rad/s; 0 means the mode frequency
  std::size_t periods = 0;
  std::string incident;  // empty means the substrate
  std::string exit;
};

struct OverlapModelConfig {
  double optical_wavelength = 1.55e-6;
  double numerical_aperture = 1.35;
  double scale = 1.0;
};

struct EoConfig {
  double reference_coupling = 0.0;  // rad/s
  double reference_volume = 0.0;    // m^3; 0 means the mode volume
  double overlap = 1.0;
  std::optional<OverlapModelConfig> overlap_model;
};

struct OracleConfig {
  BruteForceSpec brute{};        // sigma is set per row from sigma_fraction
  double sigma_fraction = 1.0 / 200.0;
  double limit = 0.02;           // allowed relative deviation
};

struct RefineConfig {
  std::size_t max_polar = 512;
};

enum class RateMethod { Rayleigh, Mie };

struct RunConfig {
  Scenario scenario = Scenario::Mie;
  std::filesystem::path materials;  // empty means the default database
  std::string substrate;
  MicrowaveMode mode;
  bool eps_from_substrate = true;
  std::vector<InclusionConfig> inclusions;
  SweepSpec sweep;
  QuadratureSpec quadrature;
  RefineConfig refine;
  RateMethod method = RateMethod::Mie;
  DualConfig dual;
  BraggConfig bragg;
  EoConfig eo;
  Vec3 rotation_axis{0.0, 0.0, 1.0};
  OracleConfig oracle;
  std::filesystem::path output;  // empty means next to the config
};

/// Parses and validates a config. Relative paths inside it are resolved
/// against `base_dir`. Throws ConfigError.
RunConfig parse_config(std::string_view json_text,
                       const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// Sweep parameters accepted by each scenario.
std::vector<std::string> sweep_parameters(Scenario s);

}  // namespace phonoscat::app
