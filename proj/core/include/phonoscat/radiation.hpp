#pragma once

// Golden-rule phonon emission rate of a microwave mode.
//
//   Gamma = 2 pi sum_q  int d^3k  (V_T / 8 pi^3) |g_q(k)|^2 delta(Omega_q(k) - w0)
//
// The substrate is an infinite homogeneous bulk, so Omega_q(k) = v_q(k_hat)|k|
// and the delta reduces onto the isofrequency surface |k| = w0 / v_q(k_hat)
// with Jacobian k^2 / v_q. The quantization volume V_T cancels between the
// density of states and |g|^2.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "phonoscat/coupling.hpp"
#include "phonoscat/materials.hpp"

namespace phonoscat {

/// Inclusions with max_i |k| L_i below this are tagged Rayleigh; |k| is
/// taken on the slowest branch. Informational only.
inline constexpr double kRegimeThreshold = 0.2;

enum class Regime { Rayleigh, Mie };

std::string to_string(Regime r);

struct QuadratureSpec {
  std::size_t polar = 64;
  std::size_t azimuth = 128;
  double tolerance = 1e-3;        // relative, for the node-doubling check
  bool check_convergence = true;
  unsigned threads = 1;
  double quantization_volume = 1e-12;  // m^3; drops out of every rate
};

struct QuadratureDiagnostics {
  std::size_t nodes = 0;             // direction nodes of the reported value
  double estimated_rel_error = 0.0;  // |G(2N) - G(N)| / G(2N); 0 if unchecked
  bool converged = true;
};

struct RadiationResult {
  double omega = 0.0;
  std::array<double, 3> branch_rates{};  // rad/s, ascending phase velocity
  double total_rate = 0.0;               // rad/s
  double quality = 0.0;                  // omega / total_rate (inf when 0)
  Regime regime = Regime::Rayleigh;
  double max_kl = 0.0;
  /// Effective C*G per branch, obtained by inverting
  /// Gamma_q = C G (V_int^2 / V_E) 4 pi w0^4 / v_q^3 with the
  /// direction-averaged phase velocity of the branch and V_int summed over
  /// inclusions. Diagnostic only.
  std::array<double, 3> cg_equivalent{};
  QuadratureDiagnostics diagnostics{};
};

/// Builds a consistent result: total = sum of branches, Q = omega / total.
RadiationResult make_result(double omega, const std::array<double, 3>& branch_rates);

/// Largest |k| L_i over all inclusion edges, using |k| = w0 / v_slowest.
double max_size_parameter(double omega, double slowest_velocity,
                          std::span<const Inclusion> incs);

/// Point-dipole emission into an isotropic substrate: form factor 1, angular
/// integral done analytically. Throws ValidationError if the substrate is
/// not isotropic. The two degenerate shear branches share the transverse
/// rate equally.
RadiationResult rayleigh_rate(const MicrowaveMode& mode, const Inclusion& inc,
                              const MaterialSpec& substrate);

/// Isofrequency-surface quadrature with coherent summation over all
/// inclusions. Works for any substrate symmetry. A failed node-doubling
/// check is reported in diagnostics, never thrown.
RadiationResult mie_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                         const MaterialSpec& substrate, const QuadratureSpec& quad = {});

struct BruteForceSpec {
  double sigma = 0.0;              // rad/s; 0 selects w0 / 200
  std::size_t polar = 128;         // midpoint cells in cos(theta)
  std::size_t azimuth = 256;       // midpoint cells in phi
  double window = 7.0;             // radial half-window in units of sigma
  double cells_per_sigma = 8.0;    // radial resolution
  unsigned threads = 1;
  double quantization_volume = 1e-12;
};

/// Direct 3D k-space sum of the golden rule with the delta function replaced
/// by a unit-area Gaussian of width sigma. Independent of the surface
/// reduction used by mie_rate; meant as an oracle.
double brute_force_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                        const MaterialSpec& substrate, const BruteForceSpec& spec = {});

// ---- sweeps ---------------------------------------------------------------

using RateFunction = std::function<RadiationResult(
    const MicrowaveMode&, std::span<const Inclusion>)>;

struct SweepRow {
  double parameter = 0.0;
  RadiationResult result;
};

struct FitRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Rows in grid order. Throws ValidationError on an empty grid.
std::vector<SweepRow> sweep_frequency(const MicrowaveMode& base,
                                      std::span<const Inclusion> incs,
                                      std::span<const double> omegas,
                                      const RateFunction& rate);

/// `apply(incs, value)` mutates a copy of the inclusion list for each grid
/// value.
std::vector<SweepRow> sweep_dimension(
    const MicrowaveMode& mode, std::span<const Inclusion> incs,
    std::span<const double> values,
    const std::function<void(std::vector<Inclusion>&, double)>& apply,
    const RateFunction& rate);

/// Least-squares slope of log(y) against log(x) over points with
/// lo <= x <= hi (the whole set when the range is empty). Throws
/// ValidationError when fewer than two usable points remain.
double loglog_slope(std::span<const double> x, std::span<const double> y,
                    FitRange range = {});

/// Q-vs-parameter slope of a sweep.
double quality_slope(std::span<const SweepRow> rows, FitRange range = {});

/// Grids.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Setters for common sweeps. Waveguide: edge frame x is the guide axis,
/// cross-section is (aspect * h) wide along y and h tall along z.
void set_waveguide_height(std::vector<Inclusion>& incs, double h, double aspect = 2.0);
void set_film_thickness(std::vector<Inclusion>& incs, double t);

}  // namespace phonoscat
