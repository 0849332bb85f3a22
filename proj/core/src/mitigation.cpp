#include "phonoscat/mitigation.hpp"

#include "phonoscat/elastodynamics.hpp"
#include "phonoscat/errors.hpp"

namespace phonoscat {

std::array<Inclusion, 2> dual_pair(const Inclusion& inc, const Vec3& separation,
                                   int relative_sign) {
  if (relative_sign != 1 && relative_sign != -1)
    throw ValidationError("relative sign must be +1 or -1");
  std::array<Inclusion, 2> pair{inc, inc};
  pair[0].center = inc.center + 0.5 * separation;
  pair[1].center = inc.center - 0.5 * separation;
  pair[1].sign = inc.sign * relative_sign;

  if (norm(separation) > 0.0) {
    // Same edge frame for both boxes, so they overlap iff the separation is
    // shorter than the edge along every edge axis.
    const Vec3 local = transpose(inc.axes.matrix()) * separation;
    bool overlap = true;
    for (std::size_t i = 0; i < 3; ++i)
      if (std::abs(local[i]) >= inc.size[i] * (1.0 - 1e-12)) overlap = false;
    if (overlap)
      throw ValidationError("dual waveguide inclusions overlap; increase the separation");
  }
  return pair;
}

DualWaveguideResult dual_waveguide_rate(const MicrowaveMode& mode, const Inclusion& inc,
                                        const Vec3& separation, int relative_sign,
                                        const MaterialSpec& substrate,
                                        const QuadratureSpec& quad) {
  const auto pair = dual_pair(inc, separation, relative_sign);
  DualWaveguideResult out;
  out.pair = mie_rate(mode, pair, substrate, quad);
  const std::array<Inclusion, 1> one{inc};
  out.single = mie_rate(mode, one, substrate, quad);
  out.suppression = out.single.total_rate > 0.0
                        ? out.pair.total_rate / (2.0 * out.single.total_rate)
                        : 0.0;
  return out;
}

void BraggStack::validate() const {
  if (!(incident_impedance > 0.0) || !(exit_impedance > 0.0))
    throw ValidationError("Bragg stack media impedances must be > 0");
  for (const auto& l : period) {
    if (!(l.impedance > 0.0)) throw ValidationError("Bragg layer impedance must be > 0");
    if (!(l.velocity > 0.0)) throw ValidationError("Bragg layer velocity must be > 0");
    if (!(l.thickness > 0.0)) throw ValidationError("Bragg layer thickness must be > 0");
  }
}

double longitudinal_impedance(const MaterialSpec& m, const Vec3& normal) {
  const BranchSet b = christoffel_fast(m, normalized(normal));
  return m.density * b[2].phase_velocity;
}

BraggLayer quarter_wave_layer(const MaterialSpec& m, const Vec3& normal,
                              double center_omega) {
  if (!(center_omega > 0.0)) throw ValidationError("center frequency must be > 0");
  const BranchSet b = christoffel_fast(m, normalized(normal));
  BraggLayer l;
  l.velocity = b[2].phase_velocity;
  l.impedance = m.density * l.velocity;
  l.thickness = 0.5 * kPi * l.velocity / center_omega;
  return l;
}

Matrix2c transfer_matrix(const BraggStack& stack, double omega) {
  stack.validate();
  const Complex i1(0.0, 1.0);
  Matrix2c one{{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}}};
  for (const auto& l : stack.period) {
    const double phase = omega * l.thickness / l.velocity;
    const double c = std::cos(phase), s = std::sin(phase);
    const Matrix2c m{{{Complex(c), i1 * l.impedance * s}, {i1 * s / l.impedance, Complex(c)}}};
    Matrix2c next{};
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t col = 0; col < 2; ++col)
        next[r][col] = one[r][0] * m[0][col] + one[r][1] * m[1][col];
    one = next;
  }
  Matrix2c total{{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}}};
  for (std::size_t p = 0; p < stack.periods; ++p) {
    Matrix2c next{};
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t col = 0; col < 2; ++col)
        next[r][col] = total[r][0] * one[0][col] + total[r][1] * one[1][col];
    total = next;
  }
  return total;
}

BraggResponse bragg_transmission(const BraggStack& stack, double omega) {
  if (!(omega > 0.0)) throw ValidationError("frequency must be > 0");
  const Matrix2c m = transfer_matrix(stack, omega);
  const double z_in = stack.incident_impedance;
  const double z_out = stack.exit_impedance;

  const Complex z_load = (m[0][0] * z_out + m[0][1]) / (m[1][0] * z_out + m[1][1]);
  const Complex r = (z_load - z_in) / (z_load + z_in);
  const Complex t =
      2.0 / (m[0][0] + m[0][1] / z_out + z_in * m[1][0] + z_in * m[1][1] / z_out);
  return {std::norm(r), std::norm(t) * z_in / z_out};
}

double quarter_wave_reflectance(double z_in, double z1, double z2, double z_out,
                                std::size_t periods) {
  const double y = std::pow(z1 / z2, 2.0 * static_cast<double>(periods)) * z_out;
  const double r = (z_in - y) / (z_in + y);
  return r * r;
}

RadiationResult mitigated_rate(const RadiationResult& result, const BraggStack& stack,
                               double omega) {
  const double t = bragg_transmission(stack, omega).transmittance;
  RadiationResult out = result;
  std::array<double, 3> rates = result.branch_rates;
  for (double& g : rates) g *= t;
  const RadiationResult scaled = make_result(result.omega, rates);
  out.branch_rates = scaled.branch_rates;
  out.total_rate = scaled.total_rate;
  out.quality = scaled.quality;
  for (double& cg : out.cg_equivalent) cg *= t;
  return out;
}

}  // namespace phonoscat
