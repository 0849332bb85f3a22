#pragma once

// Piezoelectric coupling between a microwave mode and bulk phonons.
//
// The microwave field is uniform inside every inclusion, E = E_zp e_E, and
// drives the strain S = d^T E. The coupling to one phonon plane wave is
//   hbar g = sum_j V_j (S_j : T) F_j(k),
// where T is the zero-point stress amplitude and F_j the phased cuboid
// form factor of inclusion j. Phase convention: g carries the factor i
// of the phonon strain, so g = i V (S : T) F / hbar.

#include <span>
#include <vector>

#include "phonoscat/elastodynamics.hpp"
#include "phonoscat/linalg.hpp"
#include "phonoscat/materials.hpp"

namespace phonoscat {

struct MicrowaveMode {
  double omega = 0.0;        // rad/s
  double mode_volume = 0.0;  // m^3
  Vec3 field_direction{0.0, 0.0, 1.0};
  double eps_eff = 1.0;

  void validate() const;

  /// E_zp = sqrt(hbar omega / (2 eps0 eps_eff V_E)), V/m.
  double zero_point_field() const;
};

/// Cuboid piezoelectric region. `axes` maps the cuboid's edge frame to the
/// lab frame (edge i runs along column i); `crystal` maps the material's
/// crystal frame to the lab frame. The two are independent so that the
/// crystal can be turned inside a fixed box.
struct Inclusion {
  Vec3 size{};       // (L_x, L_y, L_z) in the edge frame, m
  Vec3 center{};     // m
  Orientation axes{};
  Orientation crystal{};
  int sign = 1;      // +1 or -1
  MaterialSpec material{};

  void validate() const;
  double volume() const { return size[0] * size[1] * size[2]; }
  /// Piezo tensor in the lab frame.
  Mat3x6 lab_piezo() const { return rotate_piezo(material.piezo, crystal); }
};

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// S = d^T E converted to the symmetric tensor strain.
Mat3 induced_strain(const Mat3x6& d, const Vec3& field);

/// s e^{i k.r0} prod_i sinc(k_i L_i / 2), k taken in the edge frame.
Complex form_factor(const Inclusion& inc, const Vec3& k);

/// Coupling rate g (rad/s) of one inclusion to one zero-point phonon.
Complex coupling_rate(const MicrowaveMode& mode, const Inclusion& inc,
                      const PhononPlaneWave& phonon);

/// Coherent sum over inclusions.
Complex coupling_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                      const PhononPlaneWave& phonon);

/// |e_E . d . T|^2 / (|e_E|^2 |d|^2 |T|^2), with full-index Frobenius
/// norms. Always in [0, 1]; zero when d or T vanish.
double geometry_factor(const Vec3& field_direction, const Mat3x6& d,
                       const Mat3& stress_direction);

/// Inclusion reduced to what the quadrature needs: lab-frame induced strain
/// at the zero-point field and the cuboid geometry.
struct InclusionSource {
  Mat3 strain{};        // at E_zp
  double volume = 0.0;
  Vec3 center{};
  Mat3 axes_t{};        // transpose of edge-frame matrix
  Vec3 half_size{};
  double sign = 1.0;

  Complex form_factor(const Vec3& k) const;
};

std::vector<InclusionSource> prepare_sources(const MicrowaveMode& mode,
                                             std::span<const Inclusion> incs);

}  // namespace phonoscat
