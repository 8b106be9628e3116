#include "doctest.h"

#include "evb/dirac.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace evb;

namespace {

std::vector<Vec3> sphere_directions() {
  std::vector<Vec3> dirs;
  for (double theta : {0.0, 0.4, 1.1, kPi / 2, 2.3, kPi}) {
    for (double phi : {0.0, 1.3, 2.9, 4.4}) {
      dirs.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
    }
  }
  return dirs;
}

Bispinor random_bispinor(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Bispinor psi;
  for (int i = 0; i < 4; ++i) {
    psi(i) = Complex(g(rng), g(rng));
  }
  return psi.normalized();
}

} // namespace

TEST_CASE("Clifford relations") {
  const auto& d = dirac_matrices();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  CHECK((d.beta * d.beta - id).norm() <= 1e-15);
  for (int i = 0; i < 3; ++i) {
    CHECK((d.alpha[i] * d.beta + d.beta * d.alpha[i]).norm() <= 1e-15);
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix4 anti = d.alpha[i] * d.alpha[j] + d.alpha[j] * d.alpha[i];
      CHECK((anti - (i == j ? 2.0 : 0.0) * id).norm() <= 1e-15);
    }
  }
  CHECK(d.beta.diagonal().real().isApprox(Eigen::Vector4d(1, 1, -1, -1)));
}

TEST_CASE("(alpha . n)^2 = I for unit n") {
  for (const Vec3& n : sphere_directions()) {
    const ComplexMatrix4 h = dirac_hamiltonian({n, 0.0});
    CHECK((h * h - ComplexMatrix4::Identity()).norm() <= 1e-15);
  }
}

TEST_CASE("plane wave at rest") {
  const Bispinor w = plane_wave_spinor({Vec3::Zero(), 1.0}, PolarizationSpinor::spin_basis(0.5));
  CHECK((w - Bispinor(1, 0, 0, 0)).norm() == 0.0);
}

TEST_CASE("plane waves are normalized positive-energy eigenvectors") {
  const auto& dirs = sphere_directions();
  for (double p : {0.1, 1.0, 2.4, 10.0}) {
    for (const Vec3& n : dirs) {
      for (double s : {0.5, -0.5}) {
        const Momentum mom{p * n, 1.0};
        const Bispinor w = plane_wave_spinor(mom, PolarizationSpinor::spin_basis(s));
        CHECK(std::abs(w.squaredNorm() - 1.0) <= 1e-14);
        const double residual = (dirac_hamiltonian(mom) * w - mom.energy() * w).norm();
        CHECK(residual <= 1e-13);
      }
    }
  }
}

TEST_CASE("eigenvector residual at p = 2.4 z") {
  const Momentum mom{Vec3(0, 0, 2.4), 1.0};
  const Bispinor w = plane_wave_spinor(mom, PolarizationSpinor::spin_basis(0.5));
  CHECK((dirac_hamiltonian(mom) * w - mom.energy() * w).norm() <= 1e-13);
}

TEST_CASE("plane-wave density and current") {
  const double p = 2.4;
  const Momentum mom{Vec3(0, 0, p), 1.0};
  const Bispinor w = plane_wave_spinor(mom, PolarizationSpinor::spin_basis(0.5));
  CHECK(density(w) == doctest::Approx(1.0).epsilon(1e-15));
  const Vec3 j = current(w);
  CHECK(std::abs(j.x()) <= 1e-15);
  CHECK(std::abs(j.y()) <= 1e-15);
  CHECK(j.z() == doctest::Approx(p / mom.energy()).epsilon(1e-14));

  const Bispinor rest(1, 0, 0, 0);
  CHECK(density(rest) == 1.0);
  CHECK(current(rest).norm() == 0.0);
}

TEST_CASE("plane-wave current along arbitrary momenta is p/E") {
  for (const Vec3& n : sphere_directions()) {
    const Momentum mom{3.7 * n, 1.0};
    const Bispinor w = plane_wave_spinor(mom, {Complex(0.6, 0.0), Complex(0.0, 0.8)});
    CHECK((current(w) - mom.p / mom.energy()).norm() <= 1e-14);
  }
}

TEST_CASE("causality bound |j| <= rho for arbitrary bispinors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Bispinor psi = 3.0 * random_bispinor(rng);
    CHECK(current(psi).norm() <= density(psi) * (1.0 + 1e-14));
  }
}

TEST_CASE("plane wave is continuous as p -> 0 along a ray") {
  const auto w = PolarizationSpinor::spin_basis(-0.5);
  const Bispinor at_rest = plane_wave_spinor({Vec3::Zero(), 1.0}, w);
  const Vec3 ray = Vec3(1.0, -2.0, 0.5).normalized();
  double prev = 1.0;
  for (double p : {1e-1, 1e-2, 1e-3, 1e-5, 1e-8}) {
    const double dist = (plane_wave_spinor({p * ray, 1.0}, w) - at_rest).norm();
    CHECK(dist < prev);
    CHECK(dist <= p);
    prev = dist;
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(PolarizationSpinor(1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(PolarizationSpinor::spin_basis(0.0), std::invalid_argument);
  CHECK_NOTHROW(PolarizationSpinor(Complex(0.6, 0.0), Complex(0.0, -0.8)));
  CHECK_THROWS(Momentum{}.direction());
  const double nan = std::nan("");
  CHECK_THROWS(plane_wave_spinor({Vec3(nan, 0, 0), 1.0}, PolarizationSpinor::spin_basis(0.5)));
}
