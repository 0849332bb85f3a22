#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phonoscat/linalg.hpp"

namespace phonoscat {

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(std::size_t n);

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times the
/// periodic trapezoid rule in phi. Weights sum to 4 pi. Nodes are ordered
/// polar-major.
struct SphereRule {
  std::size_t polar = 0;
  std::size_t azimuth = 0;
  std::vector<Vec3> directions;
  std::vector<double> weights;
};

SphereRule sphere_rule(std::size_t polar, std::size_t azimuth);

/// Pairwise (cascade) summation. The result depends only on the order of
/// `values`, never on how they were produced.
double pairwise_sum(std::span<const double> values);

/// Calls body(begin, end) over contiguous chunks of [0, count) on up to
/// `threads` workers. Each index is visited exactly once.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace phonoscat
