#include "phonoscat/transducer.hpp"

#include <limits>

#include "phonoscat/elastodynamics.hpp"
#include "phonoscat/errors.hpp"
#include "phonoscat/quadrature.hpp"

namespace phonoscat {

void EoModel::validate() const {
  if (!(reference_coupling >= 0.0)) throw ValidationError("g0 must be >= 0");
  if (!(reference_volume > 0.0)) throw ValidationError("reference volume must be > 0");
  if (!(overlap >= 0.0 && overlap <= 1.0))
    throw ValidationError("overlap fraction must lie in [0, 1]");
}

double EoModel::coupling(double mode_volume) const {
  validate();
  if (!(mode_volume > 0.0)) throw ValidationError("mode volume must be > 0");
  return reference_coupling * overlap * std::sqrt(reference_volume / mode_volume);
}

double figure_of_merit(const EoModel& eo, const MicrowaveMode& mode,
                       const RadiationResult& radiation) {
  mode.validate();
  if (std::abs(radiation.omega - mode.omega) > 1e-12 * mode.omega)
    throw ValidationError("radiation result belongs to a different mode frequency");
  const double g_hz = eo.coupling(mode.mode_volume) / (2.0 * kPi);
  if (g_hz == 0.0) return 0.0;
  return g_hz * g_hz * radiation.quality;
}

double confinement_overlap(double height, double aspect, double optical_wavelength,
                           double numerical_aperture) {
  if (!(height > 0.0) || !(aspect > 0.0) || !(optical_wavelength > 0.0) ||
      !(numerical_aperture > 0.0))
    throw ValidationError("overlap model parameters must be > 0");
  double xi = 1.0;
  for (double w : {height, aspect * height}) {
    const double v = kPi * w * numerical_aperture / optical_wavelength;
    xi *= v * v / (1.0 + v * v);
  }
  return xi;
}

std::vector<MeritRow> sweep_figure_of_merit(std::span<const double> values,
                                            const std::function<MeritSetup(double)>& build,
                                            const RateFunction& rate) {
  if (values.empty()) throw ValidationError("sweep grid is empty");
  std::vector<MeritRow> rows;
  rows.reserve(values.size());
  for (double x : values) {
    const MeritSetup s = build(x);
    MeritRow row;
    row.parameter = x;
    row.radiation = rate(s.mode, s.inclusions);
    row.coupling_hz = s.eo.coupling(s.mode.mode_volume) / (2.0 * kPi);
    row.eta = figure_of_merit(s.eo, s.mode, row.radiation);
    rows.push_back(std::move(row));
  }
  return rows;
}

double mean_geometry_factor(const Vec3& field_direction, const Mat3x6& lab_piezo,
                            const MaterialSpec& substrate, std::size_t polar,
                            std::size_t azimuth) {
  const SphereRule rule = sphere_rule(polar, azimuth);
  std::vector<double> terms(rule.directions.size());
  for (std::size_t i = 0; i < rule.directions.size(); ++i) {
    const Vec3& n = rule.directions[i];
    const BranchSet b = christoffel_fast(substrate, n);
    double g = 0.0;
    for (const auto& branch : b)
      g += geometry_factor(field_direction, lab_piezo,
                           stress_from_dyad(substrate.stiffness, n, branch.polarization));
    terms[i] = rule.weights[i] * g / 3.0;
  }
  return pairwise_sum(terms) / (4.0 * kPi);
}

std::vector<OrientationRow> sweep_orientation(const MicrowaveMode& mode,
                                              const Inclusion& inc,
                                              const MaterialSpec& substrate,
                                              const Vec3& axis,
                                              std::span<const double> angles,
                                              const QuadratureSpec& quad) {
  if (angles.empty()) throw ValidationError("sweep grid is empty");
  std::vector<OrientationRow> rows;
  rows.reserve(angles.size());
  for (double a : angles) {
    Inclusion turned = inc;
    turned.crystal = Orientation::about(axis, a).compose(inc.crystal);
    const std::array<Inclusion, 1> one{turned};
    OrientationRow row;
    row.angle = a;
    row.geometry = mean_geometry_factor(mode.field_direction, turned.lab_piezo(), substrate);
    row.radiation = mie_rate(mode, one, substrate, quad);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace phonoscat
