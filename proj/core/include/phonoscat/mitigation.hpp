#pragma once

// Loss suppression: antiparallel twin inclusions and acoustic Bragg mirrors.

#include <array>
#include <vector>

#include "phonoscat/coupling.hpp"
#include "phonoscat/radiation.hpp"

namespace phonoscat {

struct DualWaveguideResult {
  RadiationResult pair;
  RadiationResult single;
  double suppression = 0.0;  // Gamma_pair / (2 Gamma_single), in [0, 2]
  double quality_gain() const { return single.total_rate / pair.total_rate; }
};

/// Places two copies of `inc` at inc.center +- separation / 2 with signs
/// (inc.sign, relative_sign * inc.sign) and sums their emission coherently.
/// Zero separation is the coincident limit and allowed; any other partial
/// overlap of the two cuboids throws ValidationError.
DualWaveguideResult dual_waveguide_rate(const MicrowaveMode& mode, const Inclusion& inc,
                                        const Vec3& separation, int relative_sign,
                                        const MaterialSpec& substrate,
                                        const QuadratureSpec& quad = {});

/// Both cuboids built by dual_waveguide_rate.
std::array<Inclusion, 2> dual_pair(const Inclusion& inc, const Vec3& separation,
                                   int relative_sign);

struct BraggLayer {
  double impedance = 0.0;  // Pa s / m
  double velocity = 0.0;   // m/s
  double thickness = 0.0;  // m
};

/// `period` is repeated `periods` times between the incident and exit media.
struct BraggStack {
  std::vector<BraggLayer> period;
  std::size_t periods = 0;
  double incident_impedance = 0.0;
  double exit_impedance = 0.0;

  void validate() const;
};

/// Longitudinal layer of `m` along `normal`, a quarter wavelength thick at
/// `center_omega`.
BraggLayer quarter_wave_layer(const MaterialSpec& m, const Vec3& normal,
                              double center_omega);

/// Longitudinal impedance rho v_L of `m` along `normal`.
double longitudinal_impedance(const MaterialSpec& m, const Vec3& normal);

using Matrix2c = std::array<std::array<Complex, 2>, 2>;

/// Product of layer matrices [[cos kd, i Z sin kd], [i sin kd / Z, cos kd]]
/// mapping (stress, velocity) at the exit face to the incident face.
Matrix2c transfer_matrix(const BraggStack& stack, double omega);

struct BraggResponse {
  double reflectance = 0.0;
  double transmittance = 0.0;
};

/// Lossless normal-incidence power reflectance and transmittance. R and T
/// are computed independently, so R + T = 1 is a real check.
BraggResponse bragg_transmission(const BraggStack& stack, double omega);

/// Reflectance of a quarter-wave stack at its center frequency:
/// ((Z_in - Y Z_out) / (Z_in + Y Z_out))^2, Y = (Z_1 / Z_2)^(2n).
double quarter_wave_reflectance(double z_in, double z1, double z2, double z_out,
                                std::size_t periods);

/// Gamma' = Gamma T(w0): a normal-incidence approximation of how the mirror
/// thins the phonon continuum.
RadiationResult mitigated_rate(const RadiationResult& result, const BraggStack& stack,
                               double omega);

}  // namespace phonoscat
