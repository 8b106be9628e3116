#include "evb/bessel_beam.hpp"

#include "evb/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evb {

BeamConfig beam_config(double p, double theta0, int ell, double s, double mass) {
  if (!std::isfinite(p) || p < 0.0) {
    throw ParameterError("momentum p must be finite and >= 0");
  }
  if (!std::isfinite(theta0) || theta0 < 0.0 || theta0 > 0.5 * kPi) {
    throw ParameterError("theta0 must lie in [0, pi/2], got " + std::to_string(theta0));
  }
  if (s != 0.5 && s != -0.5) {
    throw ParameterError("spin index s must be +1/2 or -1/2");
  }
  if (!std::isfinite(mass) || mass <= 0.0) {
    throw ParameterError("mass must be positive");
  }
  BeamConfig cfg;
  cfg.p = p;
  cfg.theta0 = theta0;
  cfg.ell = ell;
  cfg.s = s;
  cfg.mass = mass;
  cfg.energy = std::sqrt(p * p + mass * mass);
  cfg.p_perp = p * std::sin(theta0);
  cfg.p_par = p * std::cos(theta0);
  cfg.k_perp = cfg.p_perp;
  cfg.one_minus_mass_ratio = p * p / (cfg.energy * (cfg.energy + mass));
  const double sin_t = std::sin(theta0);
  cfg.delta = cfg.one_minus_mass_ratio * sin_t * sin_t;
  return cfg;
}

BeamConfig beam_config_for_delta(double delta, double theta0, int ell, double s,
                                 double mass) {
  const double sin2 = std::sin(theta0) * std::sin(theta0);
  if (!(delta >= 0.0) || (delta > 0.0 && delta >= sin2)) {
    throw ParameterError("delta must satisfy 0 <= delta < sin^2(theta0)");
  }
  const double ratio = 1.0 - (delta == 0.0 ? 0.0 : delta / sin2); // m/E
  const double energy = mass / ratio;
  const double p = std::sqrt(std::max(0.0, energy * energy - mass * mass));
  return beam_config(p, theta0, ell, s, mass);
}

BeamPoint point_from_radius(const BeamConfig& cfg, double r, double phi, double z, double t) {
  return {cfg.k_perp * r, phi, z, t};
}

Complex i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

double beam_phase(const BeamConfig& cfg, double z, double t) {
  return cfg.p_par * z - cfg.energy * t;
}

Bispinor field_closed_form(const BeamConfig& cfg, const BeamPoint& x) {
  return field_closed_form(cfg, PolarizationSpinor::spin_basis(cfg.s), x);
}

Bispinor field_closed_form(const BeamConfig& cfg, const PolarizationSpinor& w,
                           const BeamPoint& x) {
  const int l = cfg.ell;
  const auto jn = bessel_j_range(l - 1, l + 1, x.xi);
  const double j_lo = jn[0];
  const double j_mid = jn[1];
  const double j_hi = jn[2];

  const double upper = std::sqrt(1.0 - 0.5 * cfg.one_minus_mass_ratio); // sqrt((1+m/E)/2)
  const double lower = std::sqrt(0.5 * cfg.one_minus_mass_ratio) * std::cos(cfg.theta0);
  const double coupling = std::sqrt(0.5 * cfg.delta);

  const Complex e_mid = std::polar(1.0, l * x.phi);
  const Complex e_lo = std::polar(1.0, (l - 1) * x.phi);
  const Complex e_hi = std::polar(1.0, (l + 1) * x.phi);
  const Complex a = w.alpha();
  const Complex b = w.beta();

  Bispinor psi;
  psi(0) = upper * a * e_mid * j_mid;
  psi(1) = upper * b * e_mid * j_mid;
  psi(2) = lower * a * e_mid * j_mid - kI * coupling * b * e_lo * j_lo;
  psi(3) = -lower * b * e_mid * j_mid + kI * coupling * a * e_hi * j_hi;
  return std::polar(1.0, beam_phase(cfg, x.z, x.t)) * psi;
}

Bispinor field_quadrature(const BeamConfig& cfg, const BeamPoint& x, int n_nodes) {
  return field_quadrature(cfg, PolarizationSpinor::spin_basis(cfg.s), x, n_nodes);
}

Bispinor field_quadrature(const BeamConfig& cfg, const PolarizationSpinor& w,
                          const BeamPoint& x, int n_nodes) {
  if (n_nodes < 64) {
    throw ParameterError("field_quadrature needs at least 64 nodes");
  }
  Bispinor sum = Bispinor::Zero();
  const double step = 2.0 * kPi / n_nodes;
  for (int k = 0; k < n_nodes; ++k) {
    const double phi_p = k * step;
    Momentum mom{Vec3(cfg.p_perp * std::cos(phi_p), cfg.p_perp * std::sin(phi_p), cfg.p_par),
                 cfg.mass};
    const Bispinor amp = plane_wave_spinor(mom, w);
    const double arg = x.xi * std::cos(phi_p - x.phi) + cfg.ell * phi_p;
    sum += std::polar(1.0, arg) * amp;
  }
  const Complex prefactor = std::polar(1.0, beam_phase(cfg, x.z, x.t)) / i_pow(cfg.ell);
  return prefactor * sum / static_cast<double>(n_nodes);
}

Vec3 cylindrical_current(const Bispinor& psi, double phi) {
  const Vec3 j = current(psi);
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  return {c * j.x() + sn * j.y(), -sn * j.x() + c * j.y(), j.z()};
}

RadialProfile density_profile(const BeamConfig& cfg, std::span<const double> xi_grid) {
  RadialProfile prof;
  const std::size_t n = xi_grid.size();
  prof.xi.assign(xi_grid.begin(), xi_grid.end());
  prof.rho.resize(n);
  prof.j_z.resize(n);
  prof.j_phi.resize(n);
  const int l = cfg.ell;
  const int partner = l + cfg.two_s();
  const double vz = cfg.p_par / cfg.energy;
  const double vphi = cfg.p_perp / cfg.energy;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xi_grid[i];
    if (xi < 0.0) {
      throw ParameterError("density_profile: negative xi");
    }
    const auto jn = bessel_j_range(std::min(l, partner), std::max(l, partner), xi);
    const double jl = partner > l ? jn.front() : jn.back();
    const double jp = partner > l ? jn.back() : jn.front();
    prof.rho[i] = (1.0 - 0.5 * cfg.delta) * jl * jl + 0.5 * cfg.delta * jp * jp;
    prof.j_z[i] = vz * jl * jl;
    prof.j_phi[i] = vphi * jl * jp;
  }
  return prof;
}

std::vector<double> uniform_grid(double xi_max, int n_points) {
  if (!(xi_max > 0.0) || n_points < 2) {
    throw ParameterError("grid needs xi_max > 0 and at least 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    grid[static_cast<std::size_t>(i)] = xi_max * i / (n_points - 1);
  }
  return grid;
}

} // namespace evb
