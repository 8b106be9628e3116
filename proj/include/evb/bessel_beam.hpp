#pragma once

#include "evb/dirac.hpp"

#include <span>
#include <vector>

namespace evb {

/// Physical parameters of a monoenergetic spinor Bessel beam.
///
/// The plane-wave spectrum lies on a cone of polar angle theta0 on the
/// sphere |p| = p. Momenta are in units of the mass by default, hbar = 1,
/// so k_perp = p_perp.
struct BeamConfig {
  double p = 0.0;
  double theta0 = 0.0;
  int ell = 0;
  double s = 0.5;
  double mass = 1.0;

  // derived
  double energy = 1.0;
  double p_perp = 0.0;
  double p_par = 0.0;
  double k_perp = 0.0;
  double one_minus_mass_ratio = 0.0; ///< 1 - m/E
  double delta = 0.0;                ///< (1 - m/E) sin^2 theta0

  /// 2s as an integer, +1 or -1.
  int two_s() const { return s > 0.0 ? 1 : -1; }
};

/// Thrown for physically invalid beam parameters.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Validates (p >= 0, theta0 in [0, pi/2], s = +-1/2, m > 0) and fills the
/// derived quantities.
BeamConfig beam_config(double p, double theta0, int ell, double s, double mass = 1.0);

/// Config with a prescribed SOI strength: solves (1 - m/E) sin^2 theta0 = delta
/// for p. Requires 0 <= delta < sin^2 theta0 (or delta = 0).
BeamConfig beam_config_for_delta(double delta, double theta0, int ell, double s,
                                 double mass = 1.0);

/// Field sample point in cylindrical coordinates with the dimensionless
/// radius xi = k_perp r.
struct BeamPoint {
  double xi = 0.0;
  double phi = 0.0;
  double z = 0.0;
  double t = 0.0;
};

/// Converts a physical radius to xi = k_perp r.
BeamPoint point_from_radius(const BeamConfig& cfg, double r, double phi, double z, double t);

/// i^n for any integer n, exact.
Complex i_pow(int n);

/// Closed-form spinor Bessel beam for polarization w^s. The sqrt(delta)
/// coupling uses cfg.delta as stored.
Bispinor field_closed_form(const BeamConfig& cfg, const BeamPoint& x);

/// Closed form for an arbitrary cone-uniform polarization w.
Bispinor field_closed_form(const BeamConfig& cfg, const PolarizationSpinor& w,
                           const BeamPoint& x);

/// Periodic-trapezoid evaluation of the azimuthal plane-wave superposition
///   e^{i Phi} / (2 pi i^ell) * int_0^{2pi} W(p(phi')) e^{i xi cos(phi' - phi) + i ell phi'} dphi'
/// with W built from the cone momenta, independent of the Bessel closed form.
/// Requires n_nodes >= 64.
Bispinor field_quadrature(const BeamConfig& cfg, const BeamPoint& x, int n_nodes);
Bispinor field_quadrature(const BeamConfig& cfg, const PolarizationSpinor& w,
                          const BeamPoint& x, int n_nodes);

/// Overall phase Phi(z, t) = p_par z - E t.
double beam_phase(const BeamConfig& cfg, double z, double t);

/// Current in cylindrical components (j_r, j_phi, j_z) at azimuth phi.
Vec3 cylindrical_current(const Bispinor& psi, double phi);

struct RadialProfile {
  std::vector<double> xi;
  std::vector<double> rho;
  std::vector<double> j_z;
  std::vector<double> j_phi;
};

/// rho = (1 - delta/2) J_ell^2 + (delta/2) J_{ell+2s}^2,
/// j_z = (p_par/E) J_ell^2, j_phi = (p_perp/E) J_ell J_{ell+2s}.
/// xi values must be non-negative.
RadialProfile density_profile(const BeamConfig& cfg, std::span<const double> xi_grid);

/// Uniform grid of n_points on [0, xi_max].
std::vector<double> uniform_grid(double xi_max, int n_points);

} // namespace evb
