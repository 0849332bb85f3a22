#pragma once

// Small fixed-size dense algebra used throughout the engine. Everything here
// is value-typed and header-only; the sizes never exceed 6x6.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace phonoscat {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat6 = std::array<std::array<double, 6>, 6>;
using Mat3x6 = std::array<std::array<double, 6>, 3>;
using Voigt6 = std::array<double, 6>;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

constexpr Mat3 identity3() {
  return Mat3{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

constexpr Mat6 identity6() {
  Mat6 m{};
  for (std::size_t i = 0; i < 6; ++i) m[i][i] = 1.0;
  return m;
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i][j] = m[j][i];
  return out;
}

inline Mat6 transpose(const Mat6& m) {
  Mat6 out{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) out[i][j] = m[j][i];
  return out;
}

inline Mat6 operator*(const Mat6& a, const Mat6& b) {
  Mat6 out{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < 6; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < 6; ++j) out[i][j] += aik * b[k][j];
    }
  return out;
}

inline Voigt6 operator*(const Mat6& m, const Voigt6& v) {
  Voigt6 out{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline double det(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Frobenius inner product A:B.
inline double contract(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += a[i][j] * b[i][j];
  return s;
}

/// Voigt index of the symmetric pair (i, j), order (11,22,33,23,13,12).
constexpr std::size_t voigt_index(std::size_t i, std::size_t j) {
  if (i == j) return i;
  const std::size_t s = i + j;  // 1 -> (0,1), 2 -> (0,2), 3 -> (1,2)
  return s == 3 ? 3 : (s == 2 ? 4 : 5);
}

/// Index pair for a Voigt slot, inverse of voigt_index.
constexpr std::array<std::size_t, 2> voigt_pair(std::size_t slot) {
  constexpr std::array<std::array<std::size_t, 2>, 6> pairs{
      {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
  return pairs[slot];
}

/// Stress-like (no factor 2) Voigt vector from a symmetric matrix.
inline Voigt6 to_voigt_stress(const Mat3& t) {
  return {t[0][0], t[1][1], t[2][2], t[1][2], t[0][2], t[0][1]};
}

/// Engineering-strain Voigt vector (shear slots doubled) from a symmetric
/// tensor strain.
inline Voigt6 to_voigt_strain(const Mat3& s) {
  return {s[0][0], s[1][1], s[2][2], 2.0 * s[1][2], 2.0 * s[0][2],
          2.0 * s[0][1]};
}

inline Mat3 from_voigt_stress(const Voigt6& v) {
  return Mat3{{{v[0], v[5], v[4]}, {v[5], v[1], v[3]}, {v[4], v[3], v[2]}}};
}

inline Mat3 from_voigt_strain(const Voigt6& v) {
  return Mat3{{{v[0], 0.5 * v[5], 0.5 * v[4]},
               {0.5 * v[5], v[1], 0.5 * v[3]},
               {0.5 * v[4], 0.5 * v[3], v[2]}}};
}

/// Cholesky test for a symmetric 6x6 matrix.
inline bool is_positive_definite(const Mat6& a) {
  Mat6 l{};
  for (std::size_t j = 0; j < 6; ++j) {
    double d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (!(d > 0.0)) return false;
    l[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < 6; ++i) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }
  return true;
}

inline bool is_positive_definite(const Mat3& a) {
  const double m1 = a[0][0];
  const double m2 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return m1 > 0.0 && m2 > 0.0 && det(a) > 0.0;
}

template <typename M>
double max_abs(const M& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double x : row) s = std::max(s, std::abs(x));
  return s;
}

/// Eigen-decomposition of a real symmetric 3x3 matrix.
struct SymEigen3 {
  Vec3 values;   ///< ascending
  Mat3 vectors;  ///< vectors[q] is the unit eigenvector of values[q]
};

/// Cyclic Jacobi rotations until every off-diagonal entry is below
/// `tol` times the matrix scale.
SymEigen3 eigen_symmetric(const Mat3& a, double tol = 1e-15);

/// Proper rotation by `angle` (radians) about `axis` (need not be unit).
Mat3 axis_angle(const Vec3& axis, double angle);

}  // namespace phonoscat
