#include "phonoscat/coupling.hpp"

#include "phonoscat/constants.hpp"
#include "phonoscat/errors.hpp"

namespace phonoscat {

void MicrowaveMode::validate() const {
  if (!(omega > 0.0)) throw ValidationError("mode frequency must be > 0");
  if (!(mode_volume > 0.0)) throw ValidationError("mode volume must be > 0");
  if (!(eps_eff > 0.0)) throw ValidationError("eps_eff must be > 0");
  if (std::abs(norm(field_direction) - 1.0) > 1e-9)
    throw ValidationError("field direction must be a unit vector");
}

double MicrowaveMode::zero_point_field() const {
  return std::sqrt(constants::hbar * omega /
                   (2.0 * constants::epsilon0 * eps_eff * mode_volume));
}

void Inclusion::validate() const {
  for (double l : size)
    if (!(l > 0.0)) throw ValidationError("inclusion dimensions must be > 0");
  if (sign != 1 && sign != -1) throw ValidationError("inclusion sign must be +1 or -1");
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

Mat3 induced_strain(const Mat3x6& d, const Vec3& field) {
  Voigt6 s{};
  for (std::size_t J = 0; J < 6; ++J)
    s[J] = d[0][J] * field[0] + d[1][J] * field[1] + d[2][J] * field[2];
  return from_voigt_strain(s);
}

Complex InclusionSource::form_factor(const Vec3& k) const {
  const Vec3 kl = axes_t * k;
  const double envelope =
      sinc(kl[0] * half_size[0]) * sinc(kl[1] * half_size[1]) * sinc(kl[2] * half_size[2]);
  return sign * envelope * std::polar(1.0, dot(k, center));
}

namespace {

InclusionSource make_source(const Inclusion& inc, const Vec3& field) {
  InclusionSource s;
  s.strain = induced_strain(inc.lab_piezo(), field);
  s.volume = inc.volume();
  s.center = inc.center;
  s.axes_t = transpose(inc.axes.matrix());
  s.half_size = 0.5 * inc.size;
  s.sign = static_cast<double>(inc.sign);
  return s;
}

}  // namespace

Complex form_factor(const Inclusion& inc, const Vec3& k) {
  return make_source(inc, Vec3{}).form_factor(k);
}

std::vector<InclusionSource> prepare_sources(const MicrowaveMode& mode,
                                             std::span<const Inclusion> incs) {
  const Vec3 field = mode.zero_point_field() * mode.field_direction;
  std::vector<InclusionSource> out;
  out.reserve(incs.size());
  for (const auto& inc : incs) {
    inc.validate();
    out.push_back(make_source(inc, field));
  }
  return out;
}

Complex coupling_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                      const PhononPlaneWave& phonon) {
  Complex hbar_g{};
  for (const auto& s : prepare_sources(mode, incs))
    hbar_g += s.volume * contract(s.strain, phonon.stress) * s.form_factor(phonon.wave_vector);
  return Complex(0.0, 1.0) * hbar_g / constants::hbar;
}

Complex coupling_rate(const MicrowaveMode& mode, const Inclusion& inc,
                      const PhononPlaneWave& phonon) {
  return coupling_rate(mode, std::span<const Inclusion>(&inc, 1), phonon);
}

double geometry_factor(const Vec3& field_direction, const Mat3x6& d,
                       const Mat3& stress_direction) {
  double overlap = 0.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const double dijk = piezo_component(d, i, j, k);
        overlap += field_direction[i] * dijk * stress_direction[j][k];
        d2 += dijk * dijk;
      }
  const double e2 = dot(field_direction, field_direction);
  const double t2 = contract(stress_direction, stress_direction);
  if (d2 == 0.0 || t2 == 0.0 || e2 == 0.0) return 0.0;
  return std::min(1.0, overlap * overlap / (e2 * d2 * t2));
}

}  // namespace phonoscat
