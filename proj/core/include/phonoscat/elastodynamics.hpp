#pragma once

// Bulk plane-wave phonons of a homogeneous elastic substrate.

#include <array>

#include "phonoscat/linalg.hpp"
#include "phonoscat/materials.hpp"

namespace phonoscat {

struct AcousticBranch {
  Vec3 direction{};       // unit propagation direction
  int index = 0;          // 0, 1, 2 in ascending phase velocity
  double phase_velocity = 0.0;   // m/s
  Vec3 polarization{};    // unit displacement direction
  Vec3 group_velocity{};  // m/s, gradient of Omega(k) = v(k_hat)|k|
};

using BranchSet = std::array<AcousticBranch, 3>;

/// Christoffel matrix Gamma_il = c_ijkl n_j n_k / rho, units m^2/s^2.
Mat3 christoffel_matrix(const MaterialSpec& m, const Vec3& n);

/// Solves the Christoffel eigenproblem along the unit direction `n`.
/// Branches come back sorted by phase velocity. Group velocities use the
/// analytic form v_g,m = c_imkl e_i e_l n_k / (rho v).
/// Throws NumericError when an eigenvalue is not positive.
BranchSet christoffel(const MaterialSpec& m, const Vec3& n);

/// Same eigenpairs without group velocities; the quadrature hot path.
BranchSet christoffel_fast(const MaterialSpec& m, const Vec3& n);

/// Zero-point plane wave of one branch.
///
/// The physical strain of the mode is i (k_i e_j + k_j e_i) u0 / 2 times
/// e^{i k.r}; `stress` stores the real amplitude C : sym(k (x) e) u0, i.e.
/// the stress with the common factor i e^{i k.r} removed.
struct PhononPlaneWave {
  Vec3 wave_vector{};          // rad/m
  int branch = 0;
  double frequency = 0.0;      // rad/s
  double quantization_volume = 0.0;  // m^3
  double displacement = 0.0;   // u0, m
  Mat3 stress{};               // Pa
};

/// u0 = sqrt(hbar / (2 rho Omega V_T)). Throws ValidationError on k = 0 or
/// V_T <= 0.
PhononPlaneWave zero_point_stress(const MaterialSpec& m, const Vec3& k,
                                  const AcousticBranch& branch,
                                  double quantization_volume);

/// Convenience overload that solves the Christoffel problem along k.
PhononPlaneWave zero_point_stress(const MaterialSpec& m, const Vec3& k,
                                  int branch, double quantization_volume);

/// Stress C : sym(a (x) b) for arbitrary vectors a, b.
Mat3 stress_from_dyad(const Mat6& c, const Vec3& a, const Vec3& b);

}  // namespace phonoscat
