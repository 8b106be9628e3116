#include "evb/validation.hpp"

#include "evb/bessel_beam.hpp"
#include "evb/fw_operators.hpp"
#include "evb/linear_densities.hpp"
#include "evb/special_functions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace evb {

namespace {

struct Suite {
  std::vector<CheckResult> checks;

  void add(std::string name, double residual, double tol, std::string note = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tol;
    c.passed = std::isfinite(residual) && residual <= tol;
    c.note = std::move(note);
    checks.push_back(std::move(c));
  }

  void info(std::string name, double residual, double tol, std::string note) {
    add(std::move(name), residual, tol, std::move(note));
    checks.back().gating = false;
  }
};

std::vector<Vec3> directions() {
  return {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1).normalized(),
          Vec3(-0.3, 0.8, -0.5).normalized(), Vec3(0.9, -0.1, 0.4).normalized()};
}

double max_diff(const MatrixTriple& a, const MatrixTriple& b) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

void bessel_checks(Suite& suite, bool quick) {
  double reflection = 0.0;
  double recurrence = 0.0;
  const int n_max = quick ? 20 : 50;
  for (int n = -n_max; n <= n_max; ++n) {
    for (double x = 0.1; x <= 100.0; x *= quick ? 2.3 : 1.37) {
      const double j = bessel_j(n, x);
      reflection = std::max(reflection, std::abs(bessel_j(-n, x) - ((n % 2 == 0) ? j : -j)));
      recurrence = std::max(recurrence, std::abs(bessel_j(n - 1, x) + bessel_j(n + 1, x) -
                                                 (2.0 * n / x) * j));
    }
  }
  suite.add("bessel.reflection", reflection, 0.0);
  suite.add("bessel.recurrence_residual", recurrence, 1e-10);
}

void dirac_checks(Suite& suite) {
  const auto& d = dirac_matrices();
  const ComplexMatrix4 id = ComplexMatrix4::Identity();
  double clifford = (d.beta * d.beta - id).norm();
  for (int i = 0; i < 3; ++i) {
    clifford = std::max(clifford, (d.alpha[i] * d.beta + d.beta * d.alpha[i]).norm());
    for (int j = 0; j < 3; ++j) {
      clifford = std::max(clifford, (d.alpha[i] * d.alpha[j] + d.alpha[j] * d.alpha[i] -
                                     (i == j ? 2.0 : 0.0) * id)
                                        .norm());
    }
  }
  suite.add("dirac.clifford", clifford, 1e-15);

  double eig = 0.0;
  double norm = 0.0;
  for (double p : {0.1, 1.0, 2.4, 10.0}) {
    for (const Vec3& n : directions()) {
      for (double s : {0.5, -0.5}) {
        const Momentum mom{p * n, 1.0};
        const Bispinor w = plane_wave_spinor(mom, PolarizationSpinor::spin_basis(s));
        eig = std::max(eig, (dirac_hamiltonian(mom) * w - mom.energy() * w).norm());
        norm = std::max(norm, std::abs(w.squaredNorm() - 1.0));
      }
    }
  }
  suite.add("dirac.plane_wave_eigen_residual", eig, 1e-13);
  suite.add("dirac.plane_wave_norm", norm, 1e-14);
}

void beam_checks(Suite& suite, bool quick, bool inject_fault) {
  const std::vector<double> xis = quick ? std::vector<double>{0.5, 7.7, 19.6}
                                        : std::vector<double>{0.5, 3.1, 7.7, 13.2, 19.6};
  const int n_phi = quick ? 3 : 8;
  const std::vector<double> zs = quick ? std::vector<double>{1.7} : std::vector<double>{0.0, 1.7, -4.2};
  const std::vector<double> ts = quick ? std::vector<double>{2.9} : std::vector<double>{0.0, 2.9};

  double oracle = 0.0;
  double dens = 0.0;
  double jz_eig = 0.0;
  const Eigen::Vector4cd sigma_z(0.5, -0.5, 0.5, -0.5);
  for (double theta : {0.0, kPi / 4}) {
    for (int ell : {0, 1, 3, -1}) {
      for (double s : {0.5, -0.5}) {
        const auto cfg = beam_config(2.4, theta, ell, s);
        BeamConfig closed_cfg = cfg;
        if (inject_fault) {
          closed_cfg.delta *= 1.01;
        }
        for (double xi : xis) {
          for (int k = 0; k < n_phi; ++k) {
            const double phi = 2.0 * kPi * k / n_phi + 0.1;
            for (double z : zs) {
              for (double t : ts) {
                const BeamPoint x{xi, phi, z, t};
                const Bispinor a = field_closed_form(closed_cfg, x);
                oracle = std::max(oracle, (a - field_quadrature(cfg, x, 256)).norm() / a.norm());
              }
            }
            // density consistency with the radial closed forms
            const Bispinor psi = field_closed_form(cfg, BeamPoint{xi, phi, 0.3, 0.0});
            const std::vector<double> at{xi};
            const auto prof = density_profile(cfg, at);
            const Vec3 j = cylindrical_current(psi, phi);
            dens = std::max({dens, std::abs(density(psi) - prof.rho[0]), std::abs(j(0)),
                             std::abs(j(1) - prof.j_phi[0]), std::abs(j(2) - prof.j_z[0])});
          }
          if (theta > 0.0 && xi < 10.0) {
            const double h = 1e-5;
            const Bispinor psi = field_closed_form(cfg, BeamPoint{xi, 0.9, 0.4, 0.2});
            const Bispinor dphi = (field_closed_form(cfg, BeamPoint{xi, 0.9 + h, 0.4, 0.2}) -
                                   field_closed_form(cfg, BeamPoint{xi, 0.9 - h, 0.4, 0.2})) /
                                  (2.0 * h);
            const Bispinor jz = -kI * dphi + Bispinor(sigma_z.cwiseProduct(psi));
            jz_eig = std::max(jz_eig, (jz - (ell + s) * psi).norm() / psi.norm());
          }
        }
      }
    }
  }
  suite.add("beam.closed_form_vs_quadrature", oracle, 1e-9,
            inject_fault ? "fault injected: Delta * 1.01 on the closed-form side" : "");
  suite.add("beam.density_current_consistency", dens, 1e-12);
  suite.add("beam.total_am_eigenstate", jz_eig, 1e-8);

  const auto grid = uniform_grid(20.0, quick ? 101 : 401);
  double sym = 0.0;
  for (int ell : {1, 2, 3}) {
    for (double s : {0.5, -0.5}) {
      const auto a = density_profile(beam_config(2.4, kPi / 4, ell, s), grid);
      const auto b = density_profile(beam_config(2.4, kPi / 4, -ell, -s), grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        sym = std::max({sym, std::abs(a.rho[i] - b.rho[i]),
                        std::abs(std::hypot(a.j_z[i], a.j_phi[i]) - std::hypot(b.j_z[i], b.j_phi[i]))});
      }
    }
  }
  suite.add("beam.symmetry_(l,s)->(-l,-s)", sym, 1e-12);

  // s-flip splitting at the first peak of rho_1^{+1/2}
  const auto plus = beam_config_for_delta(0.3, kPi / 4, 1, 0.5);
  const auto minus = beam_config_for_delta(0.3, kPi / 4, 1, -0.5);
  const auto fine = uniform_grid(3.0, 30001);
  const auto prof_plus = density_profile(plus, fine);
  const auto peak = std::distance(prof_plus.rho.begin(),
                                  std::max_element(prof_plus.rho.begin(), prof_plus.rho.end()));
  const std::vector<double> at{fine[static_cast<std::size_t>(peak)]};
  const double split = std::abs(density_profile(minus, at).rho[0] - prof_plus.rho[static_cast<std::size_t>(peak)]);
  // residual is the shortfall below the required 1e-3 splitting
  suite.add("beam.spin_flip_splitting_at_peak", split > 1e-3 ? 0.0 : 1e-3 - split, 0.0,
            "split = " + std::to_string(split));

  const std::vector<double> axis{0.0};
  suite.add("beam.central_intensity_l1", std::abs(density_profile(minus, axis).rho[0] - 0.5 * minus.delta) +
                                             std::abs(density_profile(plus, axis).rho[0]),
            1e-12);
}

void fw_checks(Suite& suite) {
  double unitary = 0.0;
  double diag = 0.0;
  const ComplexMatrix4& beta = dirac_matrices().beta;
  for (double p : {0.1, 1.0, 2.4, 10.0}) {
    for (const Vec3& n : directions()) {
      const Momentum mom{p * n, 1.0};
      const ComplexMatrix4 u = fw_unitary(mom);
      unitary = std::max(unitary, (u.adjoint() * u - ComplexMatrix4::Identity()).norm());
      diag = std::max(diag, (u.adjoint() * dirac_hamiltonian(mom) * u - mom.energy() * beta).norm());
    }
  }
  suite.add("fw.unitarity", unitary, 1e-14);
  suite.add("fw.diagonalization", diag, 1e-13);

  double conn = 0.0;
  double curv = 0.0;
  double soi = 0.0;
  for (double p : {0.5, 2.4}) {
    for (const Vec3& n : directions()) {
      const Momentum mom{p * n, 1.0};
      conn = std::max(conn, max_diff(berry_connection(mom), berry_connection_numeric(mom, 1e-6)));
      curv = std::max(curv, max_diff(berry_curvature(mom), berry_curvature_numeric(mom)));
      soi = std::max(soi, max_diff(soi_operator(mom), soi_operator_from_connection(mom)));
    }
  }
  suite.add("fw.berry_connection_fd", conn, 1e-7);
  suite.add("fw.berry_curvature_fd", curv, 1e-6);
  suite.add("fw.soi_two_forms", soi, 1e-12);
}

void expectation_checks(Suite& suite) {
  double l_err = 0.0;
  double s_err = 0.0;
  double conserve = 0.0;
  double phase = 0.0;
  double phase_vs_l = 0.0;
  double moment = 0.0;
  for (double theta : {0.3, kPi / 4, 1.2}) {
    for (double p : {0.7, 2.4, 9.0}) {
      for (int ell : {-2, 0, 1, 3}) {
        for (double s : {0.5, -0.5}) {
          const auto cfg = beam_config(p, theta, ell, s);
          const auto rep = beam_expectations(cfg);
          l_err = std::max(l_err, std::abs(rep.L_z_numeric - rep.L_z));
          s_err = std::max(s_err, std::abs(rep.S_z_numeric - rep.S_z));
          conserve = std::max(conserve, std::abs(rep.L_z + rep.S_z - (ell + s)));
          phase = std::max(phase, std::abs(rep.berry_phase_numeric - 2.0 * kPi * cfg.delta * s));
          phase_vs_l = std::max(phase_vs_l, std::abs(rep.berry_phase_numeric / (2.0 * kPi) -
                                                     (rep.L_z_numeric - ell)));
          moment = std::max({moment, std::abs(rep.M_z - (rep.L_z + 2.0 * rep.S_z)),
                             std::abs(magnetic_moment(cfg) - (ell + 2.0 * s - cfg.delta * s))});
        }
      }
    }
  }
  suite.add("expect.L_numeric_vs_closed", l_err, 1e-10);
  suite.add("expect.S_numeric_vs_closed", s_err, 1e-10);
  suite.add("expect.am_conservation", conserve, 1e-12);
  suite.add("expect.berry_phase", phase, 1e-8);
  suite.add("expect.berry_phase_vs_oam_shift", phase_vs_l, 1e-8);
  suite.add("expect.moment_decomposition", moment, 1e-12);
}

void linear_checks(Suite& suite, bool quick) {
  const std::vector<double> widths{20, 30, 40, 60, 80, 100};
  double l_err = 0.0;
  double s_canon = 0.0;
  double s_eq21 = 0.0;
  double m_surrogate = 0.0;
  double m_cand = 0.0;
  double m_cand_soi = 0.0;
  const std::vector<int> ells = quick ? std::vector<int>{1} : std::vector<int>{0, 1, 3};
  for (int ell : ells) {
    for (double s : {0.5, -0.5}) {
      const auto cfg = beam_config(2.4, kPi / 4, ell, s);
      const auto rep = linear_expectations(cfg, widths);
      l_err = std::max(l_err, std::abs(rep.L_z_bar.value - rep.expected_L_z));
      s_canon = std::max(s_canon, std::abs(rep.S_z_bar.value - (s - cfg.delta * s)));
      s_eq21 = std::max(s_eq21, std::abs(rep.S_z_bar.value - rep.expected_S_z));
      m_surrogate = std::max(m_surrogate, std::abs(rep.M_z_bar.value - (ell + s)));
      m_cand = std::max(m_cand, std::abs(rep.M_z_bar.value - rep.moment_candidate));
      m_cand_soi = std::max(m_cand_soi, std::abs(rep.M_z_bar.value - rep.moment_candidate_soi));
    }
  }
  suite.add("linear.L_bar_vs_l+delta*s", l_err, 1e-3);
  suite.add("linear.S_bar_canonical_vs_s-delta*s", s_canon, 1e-3,
            "canonical Sigma_z on the enveloped field");
  suite.info("linear.S_bar_vs_s", s_eq21, 1e-3,
             "target s; canonical Sigma_z yields s - delta s");
  suite.add("linear.M_bar_vs_l+s", m_surrogate, 1e-3, "moment integral of the enveloped field");
  suite.info("linear.M_bar_vs_l+2s", m_cand, 1e-3, "candidate ell + 2s");
  suite.info("linear.M_bar_vs_l+2s+delta*s", m_cand_soi, 1e-3, "candidate ell + 2s + delta s");
}

} // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed || !c.gating; });
}

ValidationReport run_validation(const ValidationOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Suite suite;
  bessel_checks(suite, opts.quick);
  dirac_checks(suite);
  beam_checks(suite, opts.quick, opts.inject_fault);
  fw_checks(suite);
  expectation_checks(suite);
  linear_checks(suite, opts.quick);
  ValidationReport rep;
  rep.checks = std::move(suite.checks);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

} // namespace evb
