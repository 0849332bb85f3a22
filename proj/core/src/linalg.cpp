#include "phonoscat/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace phonoscat {

SymEigen3 eigen_symmetric(const Mat3& input, double tol) {
  Mat3 a = input;
  Mat3 v = identity3();
  const double scale = std::max(max_abs(a), 1e-300);

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off <= tol * scale) break;
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) <= 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });

  SymEigen3 out{};
  for (std::size_t q = 0; q < 3; ++q) {
    const std::size_t c = order[q];
    out.values[q] = a[c][c];
    out.vectors[q] = {v[0][c], v[1][c], v[2][c]};
  }
  return out;
}

Mat3 axis_angle(const Vec3& axis, double angle) {
  const Vec3 u = normalized(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  return Mat3{{{t * u[0] * u[0] + c, t * u[0] * u[1] - s * u[2],
                t * u[0] * u[2] + s * u[1]},
               {t * u[0] * u[1] + s * u[2], t * u[1] * u[1] + c,
                t * u[1] * u[2] - s * u[0]},
               {t * u[0] * u[2] - s * u[1], t * u[1] * u[2] + s * u[0],
                t * u[2] * u[2] + c}}};
}

}  // namespace phonoscat
