#include "phonoscat/radiation.hpp"

#include <algorithm>
#include <limits>

#include "phonoscat/constants.hpp"
#include "phonoscat/elastodynamics.hpp"
#include "phonoscat/errors.hpp"
#include "phonoscat/quadrature.hpp"

namespace phonoscat {

std::string to_string(Regime r) { return r == Regime::Rayleigh ? "rayleigh" : "mie"; }

RadiationResult make_result(double omega, const std::array<double, 3>& branch_rates) {
  RadiationResult r;
  r.omega = omega;
  r.branch_rates = branch_rates;
  r.total_rate = branch_rates[0] + branch_rates[1] + branch_rates[2];
  r.quality = r.total_rate > 0.0 ? omega / r.total_rate
                                 : std::numeric_limits<double>::infinity();
  return r;
}

double max_size_parameter(double omega, double slowest_velocity,
                          std::span<const Inclusion> incs) {
  const double k = omega / slowest_velocity;
  double m = 0.0;
  for (const auto& inc : incs)
    for (double l : inc.size) m = std::max(m, k * l);
  return m;
}

namespace {

double total_volume(std::span<const Inclusion> incs) {
  double v = 0.0;
  for (const auto& inc : incs) v += inc.volume();
  return v;
}

void finish_result(RadiationResult& r, const MicrowaveMode& mode,
                   std::span<const Inclusion> incs,
                   const std::array<double, 3>& mean_velocity, double slowest) {
  r.max_kl = max_size_parameter(mode.omega, slowest, incs);
  r.regime = r.max_kl < kRegimeThreshold ? Regime::Rayleigh : Regime::Mie;
  const double v_int = total_volume(incs);
  const double w4 = std::pow(mode.omega, 4);
  for (std::size_t q = 0; q < 3; ++q)
    r.cg_equivalent[q] = r.branch_rates[q] * mode.mode_volume *
                         std::pow(mean_velocity[q], 3) / (v_int * v_int * 4.0 * kPi * w4);
}

// Golden-rule prefactor 2 pi / hbar^2 * V_T / (8 pi^3).
double golden_rule_prefactor(double quantization_volume) {
  return quantization_volume / (4.0 * kPi * kPi * constants::hbar * constants::hbar);
}

struct SurfaceSums {
  std::array<double, 3> rates{};
  std::array<double, 3> mean_velocity{};
  double slowest = std::numeric_limits<double>::infinity();
};

SurfaceSums surface_quadrature(const MicrowaveMode& mode,
                               std::span<const InclusionSource> sources,
                               const MaterialSpec& substrate, std::size_t polar,
                               std::size_t azimuth, unsigned threads, double vt) {
  const SphereRule rule = sphere_rule(polar, azimuth);
  const std::size_t n = rule.directions.size();
  const double omega = mode.omega;
  const double u0 = std::sqrt(constants::hbar / (2.0 * substrate.density * omega * vt));
  const double pref = golden_rule_prefactor(vt);

  std::array<std::vector<double>, 3> contrib;
  std::array<std::vector<double>, 3> vel;
  for (std::size_t q = 0; q < 3; ++q) {
    contrib[q].assign(n, 0.0);
    vel[q].assign(n, 0.0);
  }

  parallel_for(polar, threads, [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t idx = row_begin * azimuth; idx < row_end * azimuth; ++idx) {
      const Vec3& dir = rule.directions[idx];
      const BranchSet branches = christoffel_fast(substrate, dir);
      for (std::size_t q = 0; q < 3; ++q) {
        const double v = branches[q].phase_velocity;
        const double k = omega / v;
        const Vec3 kvec = k * dir;
        const Mat3 stress = stress_from_dyad(substrate.stiffness, dir, branches[q].polarization);
        Complex amp{};
        for (const auto& s : sources)
          amp += s.volume * contract(s.strain, stress) * s.form_factor(kvec);
        amp *= u0 * k;
        contrib[q][idx] = rule.weights[idx] * k * k / v * std::norm(amp);
        vel[q][idx] = v * rule.weights[idx];
      }
    }
  });

  SurfaceSums out;
  for (std::size_t q = 0; q < 3; ++q) {
    out.rates[q] = pref * pairwise_sum(contrib[q]);
    out.mean_velocity[q] = pairwise_sum(vel[q]) / (4.0 * kPi);
  }
  for (std::size_t idx = 0; idx < n; ++idx)
    out.slowest = std::min(out.slowest, vel[0][idx] / rule.weights[idx]);
  return out;
}

}  // namespace

RadiationResult rayleigh_rate(const MicrowaveMode& mode, const Inclusion& inc,
                              const MaterialSpec& substrate) {
  mode.validate();
  inc.validate();
  if (!is_isotropic(substrate.stiffness))
    throw ValidationError("rayleigh_rate needs an isotropic substrate; '" +
                          substrate.name + "' is anisotropic, use mie_rate");

  const double lambda = substrate.stiffness[0][1];
  const double mu = substrate.stiffness[3][3];
  const double rho = substrate.density;
  const double v_l = std::sqrt((lambda + 2.0 * mu) / rho);
  const double v_t = std::sqrt(mu / rho);

  const Mat3 s = induced_strain(inc.lab_piezo(), mode.zero_point_field() * mode.field_direction);
  const double tr = s[0][0] + s[1][1] + s[2][2];
  const double ss = contract(s, s);

  // Sphere integrals of |S : C : sym(n (x) e)|^2 for the longitudinal branch
  // and for the sum of both shear polarizations.
  const double four_pi = 4.0 * kPi;
  const double long_avg =
      four_pi * (lambda * lambda * tr * tr + (4.0 / 3.0) * lambda * mu * tr * tr +
                 (4.0 / 15.0) * mu * mu * (tr * tr + 2.0 * ss));
  const double shear_avg =
      four_pi * 4.0 * mu * mu * (ss / 5.0 - tr * tr / 15.0);

  // Gamma_q = V^2 w^3 <A^2> / (8 pi^2 hbar rho v^5)
  const double v = inc.volume();
  const double w = mode.omega;
  const double base = v * v * w * w * w / (8.0 * kPi * kPi * constants::hbar * rho);
  const double gamma_l = base * long_avg / std::pow(v_l, 5);
  const double gamma_t = base * std::max(0.0, shear_avg) / std::pow(v_t, 5);

  RadiationResult r = make_result(w, {0.5 * gamma_t, 0.5 * gamma_t, gamma_l});
  const std::array<Inclusion, 1> one{inc};
  finish_result(r, mode, one, {v_t, v_t, v_l}, v_t);
  return r;
}

RadiationResult mie_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                         const MaterialSpec& substrate, const QuadratureSpec& quad) {
  mode.validate();
  if (incs.empty()) throw ValidationError("mie_rate needs at least one inclusion");
  if (!(quad.quantization_volume > 0.0))
    throw ValidationError("quantization volume must be > 0");
  const std::vector<InclusionSource> sources = prepare_sources(mode, incs);

  const SurfaceSums coarse = surface_quadrature(mode, sources, substrate, quad.polar,
                                                quad.azimuth, quad.threads,
                                                quad.quantization_volume);
  RadiationResult r = make_result(mode.omega, coarse.rates);
  finish_result(r, mode, incs, coarse.mean_velocity, coarse.slowest);
  r.diagnostics.nodes = quad.polar * quad.azimuth;

  if (quad.check_convergence) {
    const SurfaceSums fine =
        surface_quadrature(mode, sources, substrate, 2 * quad.polar, 2 * quad.azimuth,
                           quad.threads, quad.quantization_volume);
    const double g_fine = fine.rates[0] + fine.rates[1] + fine.rates[2];
    const double diff = std::abs(g_fine - r.total_rate);
    r.diagnostics.estimated_rel_error = g_fine > 0.0 ? diff / g_fine : 0.0;
    r.diagnostics.converged = r.diagnostics.estimated_rel_error <= quad.tolerance;
  }
  return r;
}

double brute_force_rate(const MicrowaveMode& mode, std::span<const Inclusion> incs,
                        const MaterialSpec& substrate, const BruteForceSpec& spec) {
  mode.validate();
  if (incs.empty()) throw ValidationError("brute_force_rate needs at least one inclusion");
  const double omega = mode.omega;
  const double sigma = spec.sigma > 0.0 ? spec.sigma : omega / 200.0;
  const double vt = spec.quantization_volume;
  const std::vector<InclusionSource> sources = prepare_sources(mode, incs);

  const std::size_t np = spec.polar, na = spec.azimuth;
  const std::size_t ndir = np * na;
  const double dcos = 2.0 / static_cast<double>(np);
  const double dphi = 2.0 * kPi / static_cast<double>(na);
  auto direction = [&](std::size_t idx) {
    const double c = -1.0 + (static_cast<double>(idx / na) + 0.5) * dcos;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = (static_cast<double>(idx % na) + 0.5) * dphi;
    return Vec3{s * std::cos(phi), s * std::sin(phi), c};
  };

  // Radial window per branch from the velocity extremes over the grid.
  std::array<double, 3> vmin{}, vmax{};
  vmin.fill(std::numeric_limits<double>::infinity());
  for (std::size_t idx = 0; idx < ndir; ++idx) {
    const BranchSet b = christoffel_fast(substrate, direction(idx));
    for (std::size_t q = 0; q < 3; ++q) {
      vmin[q] = std::min(vmin[q], b[q].phase_velocity);
      vmax[q] = std::max(vmax[q], b[q].phase_velocity);
    }
  }
  std::array<double, 3> k_lo{}, dk{};
  std::array<std::size_t, 3> cells{};
  for (std::size_t q = 0; q < 3; ++q) {
    k_lo[q] = std::max(0.0, (omega - spec.window * sigma) / vmax[q]);
    const double k_hi = (omega + spec.window * sigma) / vmin[q];
    const double target = sigma / (vmax[q] * spec.cells_per_sigma);
    cells[q] = static_cast<std::size_t>(std::ceil((k_hi - k_lo[q]) / target));
    dk[q] = (k_hi - k_lo[q]) / static_cast<double>(cells[q]);
  }

  const double norm_gauss = 1.0 / (sigma * std::sqrt(2.0 * kPi));
  std::vector<double> contrib(ndir, 0.0);
  parallel_for(ndir, spec.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<Complex> coeff(sources.size());
    for (std::size_t idx = begin; idx < end; ++idx) {
      const Vec3 dir = direction(idx);
      const BranchSet b = christoffel_fast(substrate, dir);
      double acc = 0.0;
      for (std::size_t q = 0; q < 3; ++q) {
        const double v = b[q].phase_velocity;
        const Mat3 stress = stress_from_dyad(substrate.stiffness, dir, b[q].polarization);
        for (std::size_t j = 0; j < sources.size(); ++j)
          coeff[j] = sources[j].volume * contract(sources[j].strain, stress);
        for (std::size_t c = 0; c < cells[q]; ++c) {
          const double k = k_lo[q] + (static_cast<double>(c) + 0.5) * dk[q];
          const double big_omega = v * k;
          const double x = (big_omega - omega) / sigma;
          if (std::abs(x) > spec.window) continue;
          const double u0 = std::sqrt(constants::hbar /
                                      (2.0 * substrate.density * big_omega * vt));
          const Vec3 kvec = k * dir;
          Complex amp{};
          for (std::size_t j = 0; j < sources.size(); ++j)
            amp += coeff[j] * sources[j].form_factor(kvec);
          amp *= u0 * k;
          acc += k * k * dk[q] * std::norm(amp) * norm_gauss * std::exp(-0.5 * x * x);
        }
      }
      contrib[idx] = acc * dcos * dphi;
    }
  });
  return golden_rule_prefactor(vt) * pairwise_sum(contrib);
}

// ---- sweeps ---------------------------------------------------------------

std::vector<SweepRow> sweep_frequency(const MicrowaveMode& base,
                                      std::span<const Inclusion> incs,
                                      std::span<const double> omegas,
                                      const RateFunction& rate) {
  if (omegas.empty()) throw ValidationError("sweep grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(omegas.size());
  for (double w : omegas) {
    MicrowaveMode m = base;
    m.omega = w;
    rows.push_back({w, rate(m, incs)});
  }
  return rows;
}

std::vector<SweepRow> sweep_dimension(
    const MicrowaveMode& mode, std::span<const Inclusion> incs,
    std::span<const double> values,
    const std::function<void(std::vector<Inclusion>&, double)>& apply,
    const RateFunction& rate) {
  if (values.empty()) throw ValidationError("sweep grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double x : values) {
    std::vector<Inclusion> local(incs.begin(), incs.end());
    apply(local, x);
    rows.push_back({x, rate(mode, local)});
  }
  return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y, FitRange range) {
  if (x.size() != y.size()) throw ValidationError("slope fit: x and y differ in length");
  const bool all = !(range.hi > range.lo);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!all && (x[i] < range.lo || x[i] > range.hi)) continue;
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw ValidationError("slope fit needs at least two positive points in range");
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw ValidationError("slope fit: degenerate abscissae");
  return (dn * sxy - sx * sy) / denom;
}

double quality_slope(std::span<const SweepRow> rows, FitRange range) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.parameter);
    y.push_back(r.result.quality);
  }
  return loglog_slope(x, y, range);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw ValidationError("grid count must be > 0");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ValidationError("log grid bounds must be > 0");
  std::vector<double> g = linear_grid(std::log(lo), std::log(hi), count);
  for (double& v : g) v = std::exp(v);
  if (count > 1) {
    g.front() = lo;
    g.back() = hi;
  }
  return g;
}

void set_waveguide_height(std::vector<Inclusion>& incs, double h, double aspect) {
  for (auto& inc : incs) {
    inc.size[1] = aspect * h;
    inc.size[2] = h;
  }
}

void set_film_thickness(std::vector<Inclusion>& incs, double t) {
  for (auto& inc : incs) inc.size[2] = t;
}

}  // namespace phonoscat
