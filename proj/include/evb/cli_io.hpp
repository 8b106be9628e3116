#pragma once

#include "evb/bessel_beam.hpp"
#include "evb/fw_operators.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evb {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Command { profile, expect, validate, sweep, linear };
enum class Format { csv, json };

enum ExitCode : int { kExitOk = 0, kExitParameter = 1, kExitValidation = 2, kExitIo = 3 };

/// Output destination could not be opened or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 1; ///< number of samples including both ends
  std::vector<double> values() const;
};

struct RunConfig {
  Command command = Command::profile;
  double p_over_m = 2.4;
  double theta0 = kPi / 4; ///< radians
  int ell = 1;
  double s = 0.5;
  double xi_max = 20.0;
  int n_points = 400;
  std::string out; ///< empty writes to the supplied stream
  Format format = Format::csv;

  bool pair = false; ///< profile: emit both spin states

  std::vector<double> widths{20, 30, 40, 60, 80, 100}; ///< linear: envelope widths in 1/k_perp
  int radial_nodes = 4000;

  bool quick = false;        ///< validate: reduced grids
  bool inject_fault = false; ///< validate: perturb Delta on the closed-form side

  SweepRange sweep_p{2.4, 2.4, 1};
  SweepRange sweep_theta{kPi / 4, kPi / 4, 1};
  bool both_spins = false; ///< sweep over s = +-1/2 instead of the single --s
};

/// Throws ParameterError naming the offending flag.
void validate_run_config(const RunConfig& run);

/// "0.7", "0.7rad", "45deg" -> radians.
double parse_angle(std::string_view text);
/// "+", "-", "0.5", "+0.5", "-0.5" -> +-0.5.
double parse_spin(std::string_view text);
Format parse_format(std::string_view text);
Command parse_command(std::string_view text);
std::string_view to_string(Command c);
std::string_view to_string(Format f);

/// Parses a comma-separated list of reals.
std::vector<double> parse_list(std::string_view text);

/// One scalar check recorded in an output document.
struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool gating = true;
  std::string note;
};

/// Command result prior to serialization.
struct Document {
  nlohmann::json params = nlohmann::json::object();
  std::string label_column; ///< optional leading string column
  std::vector<std::string> labels;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Check> checks;

  bool gating_checks_pass() const;
};

/// One line of the expectation surface; shared by expect and sweep.
struct ExpectationRow {
  double p_over_m = 0.0;
  double theta0 = 0.0;
  int ell = 0;
  double s = 0.0;
  double delta = 0.0;
  double energy = 0.0;
  ExpectationReport report;
};
ExpectationRow expectation_row(double p_over_m, double theta0, int ell, double s);

Document cmd_profile(const RunConfig& run);
Document cmd_expect(const RunConfig& run);
Document cmd_validate(const RunConfig& run);
Document cmd_sweep(const RunConfig& run);
Document cmd_linear(const RunConfig& run);
Document run_command(const RunConfig& run);

/// "%.17g"; non-finite values become "nan", "inf", "-inf".
std::string format_number(double v);

void write_csv(const Document& doc, std::ostream& os);
nlohmann::json to_json(const Document& doc);
void write_document(const Document& doc, Format format, std::ostream& os);

/// Runs the command and writes to run.out or, if empty, to out. Errors are
/// reported on err; the return value is an ExitCode.
int execute(const RunConfig& run, std::ostream& out, std::ostream& err);

} // namespace evb
