#pragma once

#include "evb/bessel_beam.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace evb {

/// Thrown when the a -> infinity extrapolation does not converge.
class NumericalQualityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bessel beam with the real-space envelope exp(-xi^2 / 2a^2); a in units of 1/k_perp.
struct RegularizedBeam {
  BeamConfig cfg;
  double a = 1.0;
};

/// Cross-section averages for one envelope width.
struct CrossSectionMoments {
  double width = 0.0;
  double norm = 0.0; ///< int rho dA / (2 pi), xi units
  double L_z = 0.0;  ///< <-i d_phi>
  double S_z = 0.0;  ///< <Sigma_z>
  double M_z = 0.0;  ///< E int (r x j)_z dA / int rho dA, units e hbar / 2E
};

/// c0 + c1 / a^2 least-squares fit. The envelope corrections to the
/// cross-section ratios are even in 1/a (they follow from the large-argument
/// expansion of e^{-z} I_n(z), z = a^2/2).
struct Extrapolation {
  double value = 0.0; ///< c0
  double slope = 0.0; ///< c1
  double residual = 0.0;
  double last_increment = 0.0;
  double error = 0.0; ///< residual + last_increment
};

struct LinearDensityReport {
  std::vector<CrossSectionMoments> per_width;
  Extrapolation L_z_bar;
  Extrapolation S_z_bar;
  Extrapolation M_z_bar;

  // reference values the extrapolations are compared against
  double expected_L_z = 0.0;          ///< ell + delta s
  double expected_S_z = 0.0;          ///< s
  double moment_candidate = 0.0;      ///< ell + 2s
  double moment_candidate_soi = 0.0;  ///< ell + 2s + delta s
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

/// Cross-section integrals of the enveloped closed-form field over
/// xi in [0, 8a], using composite Gauss-Legendre with about radial_nodes
/// points. Azimuthal integrals are done analytically on the e^{i n phi}
/// content of each component. Requires k_perp > 0 and a > 0.
CrossSectionMoments cross_section_moments(const RegularizedBeam& beam, int radial_nodes);

/// Least-squares fit of values(a) = c0 + c1/a^2. Needs at least three widths.
Extrapolation extrapolate_inverse_width(const std::vector<double>& widths,
                                        const std::vector<double>& values);

/// Per-unit-length OAM, SAM and moment for each width, extrapolated to a -> inf.
/// Throws NumericalQualityError if any fit residual exceeds max_residual.
LinearDensityReport linear_expectations(const BeamConfig& cfg, const std::vector<double>& widths,
                                        int radial_nodes = 4000, double max_residual = 1e-3);

} // namespace evb
