#pragma once

#include "evb/special_functions.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

// Dirac algebra in the standard representation, natural units hbar = c = 1.
// Momenta and energies are measured in units of the mass unless a mass is
// passed explicitly.

namespace evb {

using Complex = std::complex<double>;
using ComplexMatrix2 = Eigen::Matrix2cd;
using ComplexMatrix4 = Eigen::Matrix4cd;
using Spinor2 = Eigen::Vector2cd;
using Bispinor = Eigen::Vector4cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Rest-frame polarization w = (alpha, beta) with |alpha|^2 + |beta|^2 = 1.
class PolarizationSpinor {
public:
  /// Throws std::invalid_argument unless the amplitudes are unit-norm to 1e-14.
  PolarizationSpinor(Complex alpha, Complex beta);

  /// sigma_z eigenstate w^s: s = +1/2 -> (1, 0), s = -1/2 -> (0, 1).
  static PolarizationSpinor spin_basis(double s);

  Complex alpha() const { return w_(0); }
  Complex beta() const { return w_(1); }
  const Spinor2& vector() const { return w_; }

private:
  Spinor2 w_;
};

/// Three-momentum with the particle mass; E = sqrt(p^2 + m^2).
struct Momentum {
  Vec3 p = Vec3::Zero();
  double mass = 1.0;

  double magnitude() const { return p.norm(); }
  double energy() const;
  /// 1 - m/E evaluated as p^2 / (E (E + m)), free of cancellation near p = 0.
  double one_minus_mass_ratio() const;
  /// Unit direction p/|p|. Throws DomainError at p = 0.
  Vec3 direction() const;
};

struct DiracMatrices {
  std::array<ComplexMatrix4, 3> alpha;
  ComplexMatrix4 beta;
};

/// Pauli matrices sigma_x, sigma_y, sigma_z.
const std::array<ComplexMatrix2, 3>& pauli();

/// alpha_i = offdiag(sigma_i, sigma_i), beta = diag(1, 1, -1, -1).
const DiracMatrices& dirac_matrices();

/// sigma . v for a real 3-vector.
ComplexMatrix2 sigma_dot(const Vec3& v);

/// alpha . p + beta m, the free Dirac Hamiltonian in momentum space.
ComplexMatrix4 dirac_hamiltonian(const Momentum& mom);

/// Positive-energy plane-wave amplitude
///   W = (1/sqrt2) (sqrt(1 + m/E) w, sqrt(1 - m/E) (sigma . kappa) w).
/// At p = 0 the lower block is set to zero (its prefactor vanishes).
Bispinor plane_wave_spinor(const Momentum& mom, const PolarizationSpinor& w);

/// rho = psi^dagger psi.
double density(const Bispinor& psi);

/// j = psi^dagger alpha psi.
Vec3 current(const Bispinor& psi);

} // namespace evb
