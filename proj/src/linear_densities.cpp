#include "evb/linear_densities.hpp"

#include "evb/special_functions.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace evb {

namespace {

constexpr int kPanelOrder = 16;
constexpr double kSupportInWidths = 8.0; // exp(-64) envelope at the cutoff

// Radial amplitudes of the e^{i n phi} content of each spinor component,
// n = ell - 1, ell, ell + 1 in slots 0, 1, 2. Global phase dropped.
using ModeTable = std::array<std::array<Complex, 3>, 4>;

ModeTable mode_amplitudes(const BeamConfig& cfg, const PolarizationSpinor& w, double xi) {
  const auto jn = bessel_j_range(cfg.ell - 1, cfg.ell + 1, xi);
  const double upper = std::sqrt(1.0 - 0.5 * cfg.one_minus_mass_ratio);
  const double lower = std::sqrt(0.5 * cfg.one_minus_mass_ratio) * std::cos(cfg.theta0);
  const double coupling = std::sqrt(0.5 * cfg.delta);
  const Complex a = w.alpha();
  const Complex b = w.beta();
  ModeTable r{};
  r[0][1] = upper * a * jn[1];
  r[1][1] = upper * b * jn[1];
  r[2][1] = lower * a * jn[1];
  r[2][0] = -kI * coupling * b * jn[0];
  r[3][1] = -lower * b * jn[1];
  r[3][2] = kI * coupling * a * jn[2];
  return r;
}

struct Integrands {
  double rho = 0.0;
  double l_z = 0.0;
  double s_z = 0.0;
  double j_phi = 0.0;
};

Integrands azimuthal_averages(const ModeTable& r, int ell) {
  Integrands out;
  constexpr std::array<double, 4> sigma_z{0.5, -0.5, 0.5, -0.5};
  for (int c = 0; c < 4; ++c) {
    for (int k = 0; k < 3; ++k) {
      const double weight = std::norm(r[c][k]);
      out.rho += weight;
      out.l_z += (ell - 1 + k) * weight;
      out.s_z += sigma_z[c] * weight;
    }
  }
  // j_phi = 2 Re(u^dagger sigma_phi l), sigma_phi = [[0, -i e^{-i phi}], [i e^{i phi}, 0]]
  Complex cross = 0.0;
  for (int k = 0; k < 2; ++k) {
    cross += -kI * std::conj(r[0][k]) * r[3][k + 1];
  }
  for (int k = 1; k < 3; ++k) {
    cross += kI * std::conj(r[1][k]) * r[2][k - 1];
  }
  out.j_phi = 2.0 * cross.real();
  return out;
}

} // namespace

GaussRule gauss_legendre(int order) {
  if (order < 1) {
    throw std::invalid_argument("gauss_legendre: order must be positive");
  }
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = order == 1 ? x : p1;
      const double pn_1 = order == 1 ? 1.0 : p0;
      dp = order * (x * pn - pn_1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  return rule;
}

CrossSectionMoments cross_section_moments(const RegularizedBeam& beam, int radial_nodes) {
  const BeamConfig& cfg = beam.cfg;
  if (!(beam.a > 0.0)) {
    throw ParameterError("envelope width must be positive");
  }
  if (!(cfg.k_perp > 0.0)) {
    throw ParameterError("linear densities need k_perp > 0 (theta0 > 0, p > 0)");
  }
  if (radial_nodes < kPanelOrder) {
    throw ParameterError("too few radial nodes");
  }
  static const GaussRule rule = gauss_legendre(kPanelOrder);
  const PolarizationSpinor w = PolarizationSpinor::spin_basis(cfg.s);
  const double xi_max = kSupportInWidths * beam.a;
  const int panels = (radial_nodes + kPanelOrder - 1) / kPanelOrder;
  const double panel_width = xi_max / panels;
  const double inv_two_a2 = 1.0 / (2.0 * beam.a * beam.a);

  double rho = 0.0;
  double l_z = 0.0;
  double s_z = 0.0;
  double r_j_phi = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double mid = (pnl + 0.5) * panel_width;
    for (int q = 0; q < kPanelOrder; ++q) {
      const double xi = mid + 0.5 * panel_width * rule.nodes[static_cast<std::size_t>(q)];
      const double envelope2 = std::exp(-2.0 * xi * xi * inv_two_a2);
      const double dw = 0.5 * panel_width * rule.weights[static_cast<std::size_t>(q)] * xi *
                        envelope2;
      const auto avg = azimuthal_averages(mode_amplitudes(cfg, w, xi), cfg.ell);
      rho += dw * avg.rho;
      l_z += dw * avg.l_z;
      s_z += dw * avg.s_z;
      r_j_phi += dw * xi * avg.j_phi;
    }
  }
  CrossSectionMoments out;
  out.width = beam.a;
  out.norm = rho;
  out.L_z = l_z / rho;
  out.S_z = s_z / rho;
  // (r x j)_z = r j_phi with r = xi / k_perp; moment in units of e hbar / 2E
  out.M_z = cfg.energy * r_j_phi / (cfg.k_perp * rho);
  return out;
}

Extrapolation extrapolate_inverse_width(const std::vector<double>& widths,
                                        const std::vector<double>& values) {
  if (widths.size() != values.size() || widths.size() < 3) {
    throw std::invalid_argument("extrapolation needs at least three (width, value) pairs");
  }
  auto fit = [&](std::size_t count) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double x = 1.0 / (widths[i] * widths[i]);
      sx += x;
      sy += values[i];
      sxx += x * x;
      sxy += x * values[i];
    }
    const double n = static_cast<double>(count);
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    return std::pair{intercept, slope};
  };
  const auto [c0, c1] = fit(widths.size());
  const auto [c0_prev, c1_prev] = fit(widths.size() - 1);
  (void)c1_prev;
  double ss = 0.0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const double r = values[i] - (c0 + c1 / (widths[i] * widths[i]));
    ss += r * r;
  }
  Extrapolation e;
  e.value = c0;
  e.slope = c1;
  e.residual = std::sqrt(ss / static_cast<double>(widths.size()));
  e.last_increment = std::abs(c0 - c0_prev);
  e.error = e.residual + e.last_increment;
  return e;
}

LinearDensityReport linear_expectations(const BeamConfig& cfg, const std::vector<double>& widths,
                                        int radial_nodes, double max_residual) {
  for (std::size_t i = 1; i < widths.size(); ++i) {
    if (!(widths[i] > widths[i - 1])) {
      throw ParameterError("widths must be strictly increasing");
    }
  }
  LinearDensityReport rep;
  std::vector<double> l;
  std::vector<double> s;
  std::vector<double> m;
  for (double a : widths) {
    const auto mom = cross_section_moments({cfg, a}, radial_nodes);
    rep.per_width.push_back(mom);
    l.push_back(mom.L_z);
    s.push_back(mom.S_z);
    m.push_back(mom.M_z);
  }
  rep.L_z_bar = extrapolate_inverse_width(widths, l);
  rep.S_z_bar = extrapolate_inverse_width(widths, s);
  rep.M_z_bar = extrapolate_inverse_width(widths, m);
  rep.expected_L_z = cfg.ell + cfg.delta * cfg.s;
  rep.expected_S_z = cfg.s;
  rep.moment_candidate = cfg.ell + 2.0 * cfg.s;
  rep.moment_candidate_soi = cfg.ell + 2.0 * cfg.s + cfg.delta * cfg.s;

  for (const auto* fit : {&rep.L_z_bar, &rep.S_z_bar, &rep.M_z_bar}) {
    if (fit->residual > max_residual) {
      std::ostringstream msg;
      msg << "a -> infinity extrapolation did not converge: fit residual " << fit->residual
          << " > " << max_residual << " (L " << rep.L_z_bar.residual << ", S "
          << rep.S_z_bar.residual << ", M " << rep.M_z_bar.residual << ")";
      throw NumericalQualityError(msg.str());
    }
  }
  return rep;
}

} // namespace evb
