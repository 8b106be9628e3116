#pragma once

#include "evb/bessel_beam.hpp"
#include "evb/dirac.hpp"

#include <array>

// Foldy-Wouthuysen calculus for positive-energy electron states.
//
// Operators acting on the positive-energy subspace are momentum-parameterized
// 2x2 matrices; a vector operator is a triple of them (x, y, z). All
// quantities use hbar = 1.

namespace evb {

using MatrixTriple = std::array<ComplexMatrix2, 3>;

/// U_FW = (1/sqrt2) (sqrt(1 + m/E) - beta (alpha . kappa) sqrt(1 - m/E)).
/// Unitary; U^dagger (alpha . p + beta m) U = beta E. U = I at p = 0.
ComplexMatrix4 fw_unitary(const Momentum& mom);

/// Result of a positive-energy projection P+(U^dagger O U).
struct ProjectedOperator {
  ComplexMatrix2 block;    ///< upper-left 2x2 sector
  double cross_norm = 0.0; ///< Frobenius norm of the discarded off-diagonal blocks
};

ProjectedOperator fw_project(const ComplexMatrix4& op, const Momentum& mom);

/// Canonical spin Sigma_i = (1/2) diag(sigma_i, sigma_i).
const std::array<ComplexMatrix4, 3>& dirac_spin();

/// Non-relativistic spin S = sigma / 2.
MatrixTriple spin_operator();

/// Berry connection A = (1 - m/E) (p x sigma) / (2 p^2). Throws DomainError at p = 0.
MatrixTriple berry_connection(const Momentum& mom);

/// A = i P+(U^dagger dU/dp) by central differences of U with step rel_step * |p|.
MatrixTriple berry_connection_numeric(const Momentum& mom, double rel_step = 1e-6);

/// F = -(1/2E^2) [(m/E) sigma + (1 - m/E) kappa (kappa . sigma)]. Throws at p = 0.
MatrixTriple berry_curvature(const Momentum& mom);

/// Non-Abelian field strength of the closed-form connection,
///   F^k = eps_kij d_i A_j - i eps_kij A_i A_j,
/// with the derivatives taken by central differences (step rel_step * |p|).
/// With this sign convention [R^i, R^j] = i eps_ijk F^k for R = r + A.
MatrixTriple berry_curvature_numeric(const Momentum& mom, double rel_step = 1e-4);

/// SOI operator Delta = -(1 - m/E) kappa x (kappa x S). Throws at p = 0.
MatrixTriple soi_operator(const Momentum& mom);

/// Same operator built as A x p.
MatrixTriple soi_operator_from_connection(const Momentum& mom);

/// Positive-energy spin S_FW = S - Delta = (m/E) S + (1 - m/E) kappa (kappa . S).
MatrixTriple fw_spin(const Momentum& mom);

struct CausticRadius {
  double k_perp_r = 0.0; ///< k_perp R = ell + delta s
  double radius = 0.0;   ///< R itself; infinite when k_perp = 0 and k_perp_r != 0
  bool positive = false; ///< false when ell + delta s <= 0 (no physical caustic)
};

struct ExpectationReport {
  // closed forms, hbar = 1; M_z in units of e hbar / 2E
  double L_z = 0.0;
  double S_z = 0.0;
  double M_z = 0.0;
  double berry_phase = 0.0;
  double caustic_radius = 0.0; ///< in units of 1/k_perp

  // cone-integral evaluation of the same quantities
  double L_z_numeric = 0.0;
  double S_z_numeric = 0.0;
  double M_z_numeric = 0.0;
  double berry_phase_numeric = 0.0;
  double caustic_radius_numeric = 0.0;

  Vec3 position_shift = Vec3::Zero(); ///< <A> over the cone; <R> - z zhat
  Vec3 mean_momentum = Vec3::Zero();  ///< <P>
};

/// Expectations of L_FW, S_FW and the moment for the FW spectrum
/// w^s e^{i ell phi} on the cone, by closed form and by n_nodes-point
/// azimuthal quadrature.
ExpectationReport beam_expectations(const BeamConfig& cfg, int n_nodes = 256);

/// Phi_B = -loop integral of <w^s|A|w^s> . dp around the spectral circle.
double berry_phase(const BeamConfig& cfg, int n_nodes = 256);

/// 2 pi delta s.
double berry_phase_closed_form(const BeamConfig& cfg);

CausticRadius caustic_radius(const BeamConfig& cfg);

/// ell + 2s - delta s, in units of e hbar / 2E.
double magnetic_moment(const BeamConfig& cfg);

/// <w^s|O|w^s> for a 2x2 operator.
double spin_basis_expectation(const ComplexMatrix2& op, double s);

} // namespace evb
