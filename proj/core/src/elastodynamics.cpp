#include "phonoscat/elastodynamics.hpp"

#include <string>

#include "phonoscat/constants.hpp"
#include "phonoscat/errors.hpp"

namespace phonoscat {

Mat3 christoffel_matrix(const MaterialSpec& m, const Vec3& n) {
  Mat3 g{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t l = i; l < 3; ++l) {
      double s = 0.0;
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k)
          s += stiffness_component(m.stiffness, i, j, k, l) * n[j] * n[k];
      g[i][l] = g[l][i] = s / m.density;
    }
  return g;
}

BranchSet christoffel_fast(const MaterialSpec& m, const Vec3& n) {
  const SymEigen3 eig = eigen_symmetric(christoffel_matrix(m, n), 1e-15);
  BranchSet out{};
  for (std::size_t q = 0; q < 3; ++q) {
    if (!(eig.values[q] > 0.0))
      throw NumericError("material '" + m.name +
                         "' is elastically unstable: Christoffel eigenvalue " +
                         std::to_string(eig.values[q]));
    out[q].direction = n;
    out[q].index = static_cast<int>(q);
    out[q].phase_velocity = std::sqrt(eig.values[q]);
    out[q].polarization = eig.vectors[q];
  }
  return out;
}

BranchSet christoffel(const MaterialSpec& m, const Vec3& n) {
  BranchSet out = christoffel_fast(m, n);
  for (auto& b : out) {
    const Vec3& e = b.polarization;
    Vec3 vg{};
    for (std::size_t mm = 0; mm < 3; ++mm) {
      double s = 0.0;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
          for (std::size_t l = 0; l < 3; ++l)
            s += stiffness_component(m.stiffness, i, mm, k, l) * e[i] * e[l] * n[k];
      vg[mm] = s / (m.density * b.phase_velocity);
    }
    b.group_velocity = vg;
  }
  return out;
}

Mat3 stress_from_dyad(const Mat6& c, const Vec3& a, const Vec3& b) {
  Mat3 s{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s[i][j] = 0.5 * (a[i] * b[j] + a[j] * b[i]);
  return from_voigt_stress(c * to_voigt_strain(s));
}

PhononPlaneWave zero_point_stress(const MaterialSpec& m, const Vec3& k,
                                  const AcousticBranch& branch,
                                  double quantization_volume) {
  const double kmag = norm(k);
  if (!(kmag > 0.0)) throw ValidationError("zero wave vector has no phonon mode");
  if (!(quantization_volume > 0.0))
    throw ValidationError("quantization volume must be > 0");

  PhononPlaneWave w;
  w.wave_vector = k;
  w.branch = branch.index;
  w.frequency = branch.phase_velocity * kmag;
  w.quantization_volume = quantization_volume;
  w.displacement = std::sqrt(constants::hbar /
                             (2.0 * m.density * w.frequency * quantization_volume));
  w.stress = stress_from_dyad(m.stiffness, w.displacement * k, branch.polarization);
  return w;
}

PhononPlaneWave zero_point_stress(const MaterialSpec& m, const Vec3& k, int branch,
                                  double quantization_volume) {
  if (!(norm(k) > 0.0)) throw ValidationError("zero wave vector has no phonon mode");
  if (branch < 0 || branch > 2) throw ValidationError("branch index must be 0, 1 or 2");
  const BranchSet set = christoffel_fast(m, normalized(k));
  return zero_point_stress(m, k, set[static_cast<std::size_t>(branch)],
                           quantization_volume);
}

}  // namespace phonoscat
