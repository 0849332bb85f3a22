#pragma once

// Electro-optic figure of merit eta = g_MO^2 Q.

#include <functional>
#include <utility>
#include <vector>

#include "phonoscat/coupling.hpp"
#include "phonoscat/radiation.hpp"

namespace phonoscat {

/// g_MO = g0 xi sqrt(V_ref / V_E). The microwave zero-point field scales as
/// V_E^{-1/2}, and g_MO inherits that scaling.
struct EoModel {
  double reference_coupling = 0.0;  // g0, rad/s
  double reference_volume = 0.0;    // V_ref, m^3
  double overlap = 1.0;             // xi in [0, 1]

  void validate() const;
  double coupling(double mode_volume) const;  // rad/s
};

/// eta = (g_MO / 2 pi)^2 Q in Hz^2. Throws ValidationError when `radiation`
/// was computed at a different frequency than `mode`.
double figure_of_merit(const EoModel& eo, const MicrowaveMode& mode,
                       const RadiationResult& radiation);

/// Saturating optical-overlap model for an aspect*h x h waveguide:
/// xi = prod_w V^2 / (1 + V^2), V = pi w NA / lambda, over both widths.
double confinement_overlap(double height, double aspect, double optical_wavelength,
                           double numerical_aperture);

struct MeritRow {
  double parameter = 0.0;
  double coupling_hz = 0.0;  // g_MO / 2 pi
  RadiationResult radiation;
  double eta = 0.0;          // Hz^2
};

struct MeritSetup {
  MicrowaveMode mode;
  std::vector<Inclusion> inclusions;
  EoModel eo;
};

/// One row per grid value; `build` produces the device at that value.
std::vector<MeritRow> sweep_figure_of_merit(std::span<const double> values,
                                            const std::function<MeritSetup(double)>& build,
                                            const RateFunction& rate);

struct OrientationRow {
  double angle = 0.0;      // rad
  double geometry = 0.0;   // mean geometry factor, see mean_geometry_factor
  RadiationResult radiation;
};

/// Average of geometry_factor over sphere directions and the three branches,
/// with T_hat the normalized stress C : sym(n (x) e_q) of the substrate.
double mean_geometry_factor(const Vec3& field_direction, const Mat3x6& lab_piezo,
                            const MaterialSpec& substrate, std::size_t polar = 16,
                            std::size_t azimuth = 32);

/// Turns the crystal of `inc` (not its box) by each angle about `axis`.
std::vector<OrientationRow> sweep_orientation(const MicrowaveMode& mode,
                                              const Inclusion& inc,
                                              const MaterialSpec& substrate,
                                              const Vec3& axis,
                                              std::span<const double> angles,
                                              const QuadratureSpec& quad = {});

}  // namespace phonoscat
