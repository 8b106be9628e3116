#include "evb/dirac.hpp"

#include "evb/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace evb {

PolarizationSpinor::PolarizationSpinor(Complex alpha, Complex beta) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > 1e-14) {
    throw std::invalid_argument("PolarizationSpinor: amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
  }
  w_ << alpha, beta;
}

PolarizationSpinor PolarizationSpinor::spin_basis(double s) {
  if (s == 0.5) {
    return {1.0, 0.0};
  }
  if (s == -0.5) {
    return {0.0, 1.0};
  }
  throw std::invalid_argument("spin index must be +1/2 or -1/2");
}

double Momentum::energy() const { return std::sqrt(p.squaredNorm() + mass * mass); }

double Momentum::one_minus_mass_ratio() const {
  const double e = energy();
  return p.squaredNorm() / (e * (e + mass));
}

Vec3 Momentum::direction() const {
  const double mag = magnitude();
  if (mag == 0.0) {
    throw DomainError("momentum direction undefined at p = 0");
  }
  return p / mag;
}

const std::array<ComplexMatrix2, 3>& pauli() {
  static const std::array<ComplexMatrix2, 3> sigma = [] {
    std::array<ComplexMatrix2, 3> s;
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -kI, kI, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return sigma;
}

const DiracMatrices& dirac_matrices() {
  static const DiracMatrices mats = [] {
    DiracMatrices d;
    for (int i = 0; i < 3; ++i) {
      d.alpha[i].setZero();
      d.alpha[i].topRightCorner<2, 2>() = pauli()[i];
      d.alpha[i].bottomLeftCorner<2, 2>() = pauli()[i];
    }
    d.beta.setZero();
    d.beta.diagonal() << 1.0, 1.0, -1.0, -1.0;
    return d;
  }();
  return mats;
}

ComplexMatrix2 sigma_dot(const Vec3& v) {
  const auto& s = pauli();
  return v.x() * s[0] + v.y() * s[1] + v.z() * s[2];
}

ComplexMatrix4 dirac_hamiltonian(const Momentum& mom) {
  const auto& d = dirac_matrices();
  return mom.p.x() * d.alpha[0] + mom.p.y() * d.alpha[1] + mom.p.z() * d.alpha[2] +
         mom.mass * d.beta;
}

Bispinor plane_wave_spinor(const Momentum& mom, const PolarizationSpinor& w) {
  if (!mom.p.allFinite() || !std::isfinite(mom.mass)) {
    throw DomainError("plane_wave_spinor: non-finite momentum");
  }
  const double ratio = mom.mass / mom.energy();
  const double upper = std::sqrt(0.5 * (1.0 + ratio));
  Bispinor psi;
  psi.head<2>() = upper * w.vector();
  if (mom.magnitude() == 0.0) {
    psi.tail<2>().setZero();
  } else {
    const double lower = std::sqrt(0.5 * mom.one_minus_mass_ratio());
    psi.tail<2>() = lower * (sigma_dot(mom.direction()) * w.vector());
  }
  return psi;
}

double density(const Bispinor& psi) { return psi.squaredNorm(); }

Vec3 current(const Bispinor& psi) {
  const auto& d = dirac_matrices();
  Vec3 j;
  for (int i = 0; i < 3; ++i) {
    j(i) = psi.dot(d.alpha[i] * psi).real(); // dot() conjugates the left operand
  }
  return j;
}

} // namespace evb
