#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phonoscat_app/config.hpp"

namespace phonoscat::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Hard ceiling on polar nodes during automatic refinement, whatever the
/// config asks for.
inline constexpr std::size_t kHardPolarCap = 4096;

/// Command-line overrides applied on top of the config.
struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> threads;
  std::optional<std::pair<std::size_t, std::size_t>> quad;  // polar x azimuth
};

/// Cells are stored already formatted.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunOutput {
  Table table;
  std::string report;
  /// Set when a self-checking scenario (oracle_check) missed its limit.
  std::optional<std::string> check_failure;
};

/// Shortest decimal that parses back to the same double.
std::string format_number(double x);

/// CSV with a header row; numeric cells use format_number.
std::string to_csv(const Table& t);

/// Parses "NxM" as polar x azimuth. Throws ConfigError.
std::pair<std::size_t, std::size_t> parse_quad(const std::string& text);

void apply_options(RunConfig& cfg, const RunOptions& opts);

/// Computes the table and report for a validated config. Throws
/// ConfigError for unresolved references and NumericError when the
/// quadrature cannot be converged under the node cap.
RunOutput execute(const RunConfig& cfg, const MaterialDatabase& db);

/// Mie rate with node doubling until the convergence check passes. Throws
/// NumericError past `max_polar` polar nodes.
RadiationResult converged_mie_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                                   const MaterialSpec& substrate, QuadratureSpec quad,
                                   std::size_t max_polar);

/// Full `phonoscat run`: load, execute, write the CSV, print the report.
/// Returns the process exit code; diagnostics go to `err`.
int run_command(const std::filesystem::path& config_path, const RunOptions& opts,
                std::ostream& out, std::ostream& err);

}  // namespace phonoscat::app
