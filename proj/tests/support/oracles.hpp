#pragma once

// Test-only reference implementations. They use full-index tensor loops and
// direct integration, and share no code path with the library beyond the
// Voigt accessors and basic types.

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "phonoscat/linalg.hpp"
#include "phonoscat/materials.hpp"

namespace phonoscat::oracle {

using Tensor4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;
using Tensor3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

inline Tensor4 expand(const Mat6& c) {
  Tensor4 t{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          t[i][j][k][l] = c[voigt_index(i, j)][voigt_index(k, l)];
  return t;
}

inline Tensor3 expand(const Mat3x6& d) {
  Tensor3 t{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        t[i][j][k] = (j == k ? 1.0 : 0.5) * d[i][voigt_index(j, k)];
  return t;
}

inline Tensor4 rotate(const Tensor4& c, const Mat3& r) {
  Tensor4 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
          double s = 0.0;
          for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
              for (std::size_t g = 0; g < 3; ++g)
                for (std::size_t h = 0; h < 3; ++h)
                  s += r[i][a] * r[j][b] * r[k][g] * r[l][h] * c[a][b][g][h];
          out[i][j][k][l] = s;
        }
  return out;
}

inline Tensor3 rotate(const Tensor3& d, const Mat3& r) {
  Tensor3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < 3; ++a)
          for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t g = 0; g < 3; ++g) s += r[i][a] * r[j][b] * r[k][g] * d[a][b][g];
        out[i][j][k] = s;
      }
  return out;
}

/// sigma_ij = c_ijkl s_kl
inline Mat3 contract(const Tensor4& c, const Mat3& s) {
  Mat3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) out[i][j] += c[i][j][k][l] * s[k][l];
  return out;
}

/// s_jk = d_ijk E_i
inline Mat3 strain(const Tensor3& d, const Vec3& e) {
  Mat3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) out[j][k] += d[i][j][k] * e[i];
  return out;
}

/// Haar-ish random rotation from a random axis and angle.
inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  Vec3 axis{n(rng), n(rng), n(rng)};
  return axis_angle(axis, u(rng));
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return normalized(Vec3{n(rng), n(rng), n(rng)});
}

/// Anisotropic (triclinic-looking) stiffness: a random SPD perturbation of
/// an isotropic base, Pa.
inline Mat6 random_stiffness(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat6 a{};
  for (auto& row : a)
    for (double& x : row) x = u(rng);
  Mat6 c{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 6; ++k) s += a[i][k] * a[j][k];
      c[i][j] = 2e10 * s;
    }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) c[i][j] += 1e11;
    c[i][i] += 1.2e11;
    c[i + 3][i + 3] += 6e10;
  }
  return c;
}

inline Mat3x6 random_piezo(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat3x6 d{};
  for (auto& row : d)
    for (double& x : row) x = 3e-11 * u(rng);
  return d;
}

inline MaterialSpec random_material(std::mt19937_64& rng) {
  MaterialSpec m;
  m.name = "random";
  m.density = 4000.0;
  m.stiffness = random_stiffness(rng);
  m.piezo = random_piezo(rng);
  m.permittivity = identity3();
  return m;
}

}  // namespace phonoscat::oracle
