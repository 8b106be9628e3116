#include "evb/fw_operators.hpp"

#include "evb/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace evb {

namespace {

constexpr int kLevi[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}},
};

void require_nonzero(const Momentum& mom, const char* what) {
  if (mom.magnitude() == 0.0) {
    throw DomainError(std::string(what) + " is singular at p = 0");
  }
}

// kappa x (kappa x S) for the operator-valued vector S.
MatrixTriple double_cross(const Vec3& kappa, const MatrixTriple& op) {
  // kappa x (kappa x S) = kappa (kappa . S) - S
  ComplexMatrix2 k_dot = ComplexMatrix2::Zero();
  for (int i = 0; i < 3; ++i) {
    k_dot += kappa(i) * op[i];
  }
  MatrixTriple out;
  for (int i = 0; i < 3; ++i) {
    out[i] = kappa(i) * k_dot - op[i];
  }
  return out;
}

ComplexMatrix4 fw_unitary_shifted(const Momentum& mom, int axis, double shift) {
  Momentum m = mom;
  m.p(axis) += shift;
  return fw_unitary(m);
}

} // namespace

ComplexMatrix4 fw_unitary(const Momentum& mom) {
  const double omr = mom.one_minus_mass_ratio();
  const double a = std::sqrt(1.0 - 0.5 * omr); // sqrt((1 + m/E)/2)
  ComplexMatrix4 u = a * ComplexMatrix4::Identity();
  if (mom.magnitude() == 0.0) {
    return u;
  }
  const double b = std::sqrt(0.5 * omr);
  const ComplexMatrix2 sk = sigma_dot(mom.direction());
  // beta (alpha . kappa) = [[0, sigma.kappa], [-sigma.kappa, 0]]
  u.topRightCorner<2, 2>() = -b * sk;
  u.bottomLeftCorner<2, 2>() = b * sk;
  return u;
}

ProjectedOperator fw_project(const ComplexMatrix4& op, const Momentum& mom) {
  const ComplexMatrix4 u = fw_unitary(mom);
  const ComplexMatrix4 t = u.adjoint() * op * u;
  ProjectedOperator out;
  out.block = t.topLeftCorner<2, 2>();
  out.cross_norm = std::sqrt(t.topRightCorner<2, 2>().squaredNorm() +
                             t.bottomLeftCorner<2, 2>().squaredNorm());
  return out;
}

const std::array<ComplexMatrix4, 3>& dirac_spin() {
  static const std::array<ComplexMatrix4, 3> spin = [] {
    std::array<ComplexMatrix4, 3> out;
    for (int i = 0; i < 3; ++i) {
      out[i].setZero();
      out[i].topLeftCorner<2, 2>() = 0.5 * pauli()[i];
      out[i].bottomRightCorner<2, 2>() = 0.5 * pauli()[i];
    }
    return out;
  }();
  return spin;
}

MatrixTriple spin_operator() {
  const auto& s = pauli();
  return {0.5 * s[0], 0.5 * s[1], 0.5 * s[2]};
}

MatrixTriple berry_connection(const Momentum& mom) {
  require_nonzero(mom, "Berry connection");
  const double scale = mom.one_minus_mass_ratio() / (2.0 * mom.p.squaredNorm());
  const auto& s = pauli();
  MatrixTriple a;
  for (int i = 0; i < 3; ++i) {
    a[i].setZero();
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        if (kLevi[i][j][k] != 0) {
          a[i] += (scale * kLevi[i][j][k] * mom.p(j)) * s[k];
        }
      }
    }
  }
  return a;
}

MatrixTriple berry_connection_numeric(const Momentum& mom, double rel_step) {
  require_nonzero(mom, "Berry connection");
  const double h = rel_step * mom.magnitude();
  const ComplexMatrix4 u_dag = fw_unitary(mom).adjoint();
  MatrixTriple a;
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix4 du =
        (fw_unitary_shifted(mom, i, h) - fw_unitary_shifted(mom, i, -h)) / (2.0 * h);
    a[i] = kI * (u_dag * du).topLeftCorner<2, 2>();
  }
  return a;
}

MatrixTriple berry_curvature(const Momentum& mom) {
  require_nonzero(mom, "Berry curvature");
  const double e = mom.energy();
  const double ratio = mom.mass / e;
  const double omr = mom.one_minus_mass_ratio();
  const Vec3 kappa = mom.direction();
  const ComplexMatrix2 k_sigma = sigma_dot(kappa);
  const auto& s = pauli();
  MatrixTriple f;
  for (int i = 0; i < 3; ++i) {
    f[i] = -(ratio * s[i] + omr * kappa(i) * k_sigma) / (2.0 * e * e);
  }
  return f;
}

MatrixTriple berry_curvature_numeric(const Momentum& mom, double rel_step) {
  require_nonzero(mom, "Berry curvature");
  const double h = rel_step * mom.magnitude();
  // d_i A_j, indexed [i][j]
  std::array<MatrixTriple, 3> grad;
  for (int i = 0; i < 3; ++i) {
    Momentum fwd = mom;
    Momentum bwd = mom;
    fwd.p(i) += h;
    bwd.p(i) -= h;
    const auto a_f = berry_connection(fwd);
    const auto a_b = berry_connection(bwd);
    for (int j = 0; j < 3; ++j) {
      grad[i][j] = (a_f[j] - a_b[j]) / (2.0 * h);
    }
  }
  const auto a = berry_connection(mom);
  MatrixTriple f;
  for (int k = 0; k < 3; ++k) {
    f[k].setZero();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (kLevi[k][i][j] != 0) {
          f[k] += static_cast<double>(kLevi[k][i][j]) * (grad[i][j] - kI * a[i] * a[j]);
        }
      }
    }
  }
  return f;
}

MatrixTriple soi_operator(const Momentum& mom) {
  require_nonzero(mom, "SOI operator");
  const double omr = mom.one_minus_mass_ratio();
  auto out = double_cross(mom.direction(), spin_operator());
  for (auto& m : out) {
    m *= -omr;
  }
  return out;
}

MatrixTriple soi_operator_from_connection(const Momentum& mom) {
  const auto a = berry_connection(mom);
  MatrixTriple out;
  for (int k = 0; k < 3; ++k) {
    out[k].setZero();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (kLevi[k][i][j] != 0) {
          out[k] += (kLevi[k][i][j] * mom.p(j)) * a[i];
        }
      }
    }
  }
  return out;
}

MatrixTriple fw_spin(const Momentum& mom) {
  const auto s = spin_operator();
  if (mom.magnitude() == 0.0) {
    return s;
  }
  const auto d = soi_operator(mom);
  return {s[0] - d[0], s[1] - d[1], s[2] - d[2]};
}

double spin_basis_expectation(const ComplexMatrix2& op, double s) {
  const Spinor2& w = PolarizationSpinor::spin_basis(s).vector();
  return w.dot(op * w).real();
}

double berry_phase_closed_form(const BeamConfig& cfg) { return 2.0 * kPi * cfg.delta * cfg.s; }

double berry_phase(const BeamConfig& cfg, int n_nodes) {
  if (n_nodes < 64) {
    throw ParameterError("berry_phase needs at least 64 nodes");
  }
  if (cfg.p_perp == 0.0) {
    return 0.0; // degenerate loop
  }
  const Spinor2& w = PolarizationSpinor::spin_basis(cfg.s).vector();
  const double step = 2.0 * kPi / n_nodes;
  double loop = 0.0;
  for (int k = 0; k < n_nodes; ++k) {
    const double phi = k * step;
    const Momentum mom{Vec3(cfg.p_perp * std::cos(phi), cfg.p_perp * std::sin(phi), cfg.p_par),
                       cfg.mass};
    const Vec3 tangent(-cfg.p_perp * std::sin(phi), cfg.p_perp * std::cos(phi), 0.0);
    const auto a = berry_connection(mom);
    for (int i = 0; i < 3; ++i) {
      loop += w.dot(a[i] * w).real() * tangent(i);
    }
  }
  return -loop * step;
}

CausticRadius caustic_radius(const BeamConfig& cfg) {
  CausticRadius out;
  out.k_perp_r = cfg.ell + cfg.delta * cfg.s;
  out.positive = out.k_perp_r > 0.0;
  out.radius = out.k_perp_r / cfg.k_perp; // +-inf or nan when k_perp = 0
  if (cfg.k_perp == 0.0 && out.k_perp_r == 0.0) {
    out.radius = 0.0;
  }
  return out;
}

double magnetic_moment(const BeamConfig& cfg) {
  return cfg.ell + 2.0 * cfg.s - cfg.delta * cfg.s;
}

ExpectationReport beam_expectations(const BeamConfig& cfg, int n_nodes) {
  if (n_nodes < 64) {
    throw ParameterError("beam_expectations needs at least 64 nodes");
  }
  ExpectationReport rep;
  rep.L_z = cfg.ell + cfg.delta * cfg.s;
  rep.S_z = cfg.s - cfg.delta * cfg.s;
  rep.M_z = magnetic_moment(cfg);
  rep.berry_phase = berry_phase_closed_form(cfg);
  rep.caustic_radius = caustic_radius(cfg).k_perp_r;

  // FW spectrum f(phi) = w^s e^{i ell phi} on the cone; the delta(p_perp - p_perp0)^2
  // factor is common to numerator and denominator and drops out.
  const Spinor2& w = PolarizationSpinor::spin_basis(cfg.s).vector();
  const auto spin = spin_operator();
  const double step = 2.0 * kPi / n_nodes;
  auto amplitude = [&](double phi) -> Spinor2 { return std::polar(1.0, cfg.ell * phi) * w; };

  // spectral azimuthal derivative of the sampled spectrum: DFT, multiply by i m, inverse
  std::vector<Spinor2> samples(static_cast<std::size_t>(n_nodes));
  for (int k = 0; k < n_nodes; ++k) samples[static_cast<std::size_t>(k)] = amplitude(k * step);
  std::vector<Spinor2> derivative(samples.size(), Spinor2::Zero());
  for (int m = -n_nodes / 2 + 1; m < n_nodes / 2; ++m) {
    Spinor2 c = Spinor2::Zero();
    for (int k = 0; k < n_nodes; ++k) {
      c += std::polar(1.0, -m * k * step) * samples[static_cast<std::size_t>(k)];
    }
    c *= Complex(0.0, m) / static_cast<double>(n_nodes);
    for (int k = 0; k < n_nodes; ++k) {
      derivative[static_cast<std::size_t>(k)] += std::polar(1.0, m * k * step) * c;
    }
  }

  double norm = 0.0;
  double l_sum = 0.0;
  double s_sum = 0.0;
  Vec3 shift = Vec3::Zero();
  Vec3 mom_sum = Vec3::Zero();
  for (int k = 0; k < n_nodes; ++k) {
    const double phi = k * step;
    const Momentum mom{Vec3(cfg.p_perp * std::cos(phi), cfg.p_perp * std::sin(phi), cfg.p_par),
                       cfg.mass};
    const Spinor2& f = samples[static_cast<std::size_t>(k)];
    const Spinor2 l_canon = -kI * derivative[static_cast<std::size_t>(k)];

    ComplexMatrix2 soi_z = ComplexMatrix2::Zero();
    if (mom.magnitude() > 0.0) {
      soi_z = soi_operator(mom)[2];
      const auto a = berry_connection(mom);
      for (int i = 0; i < 3; ++i) {
        shift(i) += f.dot(a[i] * f).real();
      }
    }
    norm += f.squaredNorm();
    l_sum += f.dot(l_canon + soi_z * f).real();
    s_sum += f.dot((spin[2] - soi_z) * f).real();
    mom_sum += f.squaredNorm() * mom.p;
  }
  rep.L_z_numeric = l_sum / norm;
  rep.S_z_numeric = s_sum / norm;
  rep.M_z_numeric = rep.L_z_numeric + 2.0 * rep.S_z_numeric;
  rep.berry_phase_numeric = berry_phase(cfg, n_nodes);
  rep.caustic_radius_numeric = rep.L_z_numeric;
  rep.position_shift = shift / norm;
  rep.mean_momentum = mom_sum / norm;
  return rep;
}

} // namespace evb
