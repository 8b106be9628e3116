#include "evb/cli_io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct RawFlags {
  std::string theta0 = "0.7853981633974483";
  std::string s = "+0.5";
  std::string format; ///< empty: json for validate, csv otherwise
  std::string widths;
  std::string theta_min, theta_max;
};

void add_beam_flags(CLI::App* cmd, evb::RunConfig& run, RawFlags& raw) {
  cmd->add_option("--p", run.p_over_m, "momentum p/m")->capture_default_str();
  cmd->add_option("--theta0", raw.theta0, "cone angle, radians or with deg/rad suffix")->capture_default_str();
  cmd->add_option("--ell", run.ell, "vortex index")->capture_default_str();
  cmd->add_option("--s", raw.s, "spin: +, -, 0.5, -0.5")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, evb::RunConfig& run, RawFlags& raw) {
  cmd->add_option("--out", run.out, "output file (default stdout)");
  cmd->add_option("--format", raw.format, "csv or json (default csv; json for validate)");
}

} // namespace

int main(int argc, char** argv) {
  evb::RunConfig run;
  RawFlags raw;

  CLI::App app{"Relativistic electron vortex beams: profiles, expectation values, validation"};
  app.set_version_flag("--version", evb::kToolVersion);
  app.require_subcommand(1);

  auto* profile = app.add_subcommand("profile", "radial density and current profile");
  add_beam_flags(profile, run, raw);
  add_output_flags(profile, run, raw);
  profile->add_option("--xi-max", run.xi_max, "largest xi = k_perp r")->capture_default_str();
  profile->add_option("--points", run.n_points, "number of grid points")->capture_default_str();
  profile->add_flag("--pair", run.pair, "emit both s = +1/2 and s = -1/2");

  auto* expect = app.add_subcommand("expect", "expectation values, closed form and numeric");
  add_beam_flags(expect, run, raw);
  add_output_flags(expect, run, raw);

  auto* validate = app.add_subcommand("validate", "run the oracle and invariant suite");
  add_output_flags(validate, run, raw);
  validate->add_flag("--quick", run.quick, "reduced grids");
  validate->add_flag("--inject-fault", run.inject_fault, "debug: scale Delta by 1.01 on the closed-form side");

  auto* sweep = app.add_subcommand("sweep", "expectation surface over p/m and theta0");
  add_beam_flags(sweep, run, raw);
  add_output_flags(sweep, run, raw);
  sweep->add_option("--p-min", run.sweep_p.min)->capture_default_str();
  sweep->add_option("--p-max", run.sweep_p.max)->capture_default_str();
  sweep->add_option("--p-steps", run.sweep_p.steps)->capture_default_str();
  sweep->add_option("--theta-min", raw.theta_min, "angle, radians or with deg/rad suffix");
  sweep->add_option("--theta-max", raw.theta_max, "angle, radians or with deg/rad suffix");
  sweep->add_option("--theta-steps", run.sweep_theta.steps)->capture_default_str();
  sweep->add_flag("--both-spins", run.both_spins, "sweep s = +1/2 and s = -1/2");

  auto* linear = app.add_subcommand("linear", "linear densities from Gaussian-regularized beams");
  add_beam_flags(linear, run, raw);
  add_output_flags(linear, run, raw);
  linear->add_option("--widths", raw.widths, "comma-separated envelope widths in 1/k_perp");
  linear->add_option("--radial-nodes", run.radial_nodes)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return evb::kExitParameter;
  }

  try {
    run.command = evb::parse_command(app.get_subcommands().front()->get_name());
    run.theta0 = evb::parse_angle(raw.theta0);
    run.s = evb::parse_spin(raw.s);
    if (raw.format.empty()) raw.format = run.command == evb::Command::validate ? "json" : "csv";
    run.format = evb::parse_format(raw.format);
    if (!raw.widths.empty()) run.widths = evb::parse_list(raw.widths);
    if (run.command == evb::Command::sweep) {
      run.sweep_theta.min = raw.theta_min.empty() ? run.theta0 : evb::parse_angle(raw.theta_min);
      run.sweep_theta.max = raw.theta_max.empty() ? run.sweep_theta.min : evb::parse_angle(raw.theta_max);
      if (sweep->count("--p-min") == 0) run.sweep_p.min = run.p_over_m;
      if (sweep->count("--p-max") == 0) run.sweep_p.max = run.sweep_p.min;
    }
  } catch (const evb::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return evb::kExitParameter;
  }

  return evb::execute(run, std::cout, std::cerr);
}
