#include "evb/cli_io.hpp"

#include "evb/linear_densities.hpp"
#include "evb/special_functions.hpp"
#include "evb/validation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

namespace evb {

namespace {

std::string_view trim(std::string_view t) {
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  return t;
}

bool parse_double(std::string_view t, double& v) {
  t = trim(t);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  if (t.empty()) return false;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  return res.ec == std::errc() && res.ptr == t.data() + t.size() && std::isfinite(v);
}

bool ends_with(std::string_view t, std::string_view suffix) {
  return t.size() >= suffix.size() && t.substr(t.size() - suffix.size()) == suffix;
}

nlohmann::json base_params(const RunConfig& run) {
  nlohmann::json p;
  p["command"] = std::string(to_string(run.command));
  p["p_over_m"] = run.p_over_m;
  p["theta0"] = run.theta0;
  p["ell"] = run.ell;
  p["s"] = run.s;
  p["mass"] = 1.0;
  return p;
}

void add_derived(nlohmann::json& p, const BeamConfig& cfg) {
  p["energy"] = cfg.energy;
  p["k_perp"] = cfg.k_perp;
  p["delta"] = cfg.delta;
}

Check make_check(std::string name, double value, double reference, double tol, bool gating = true,
                 std::string note = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.reference = reference;
  c.residual = std::abs(value - reference);
  c.tolerance = tol;
  c.passed = c.residual <= tol;
  c.gating = gating;
  c.note = std::move(note);
  return c;
}

} // namespace

std::vector<double> SweepRange::values() const {
  if (steps < 1) throw ParameterError("sweep steps must be >= 1");
  if (steps == 1) return {min};
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    v[static_cast<std::size_t>(i)] =
        (i == steps - 1) ? max : min + (max - min) * static_cast<double>(i) / (steps - 1);
  }
  return v;
}

double parse_angle(std::string_view text) {
  text = trim(text);
  double scale = 1.0;
  if (ends_with(text, "deg")) {
    text.remove_suffix(3);
    scale = kPi / 180.0;
  } else if (ends_with(text, "rad")) {
    text.remove_suffix(3);
  }
  double v = 0.0;
  if (!parse_double(text, v)) throw ParameterError("--theta0: cannot parse angle");
  return v * scale;
}

double parse_spin(std::string_view text) {
  text = trim(text);
  if (text == "+" || text == "+0.5" || text == "0.5" || text == "+1/2" || text == "1/2") return 0.5;
  if (text == "-" || text == "-0.5" || text == "-1/2") return -0.5;
  throw ParameterError("--s: expected +, -, 0.5 or -0.5");
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ParameterError("--format: expected csv or json");
}

Command parse_command(std::string_view text) {
  if (text == "profile") return Command::profile;
  if (text == "expect") return Command::expect;
  if (text == "validate") return Command::validate;
  if (text == "sweep") return Command::sweep;
  if (text == "linear") return Command::linear;
  throw ParameterError("unknown command");
}

std::string_view to_string(Command c) {
  switch (c) {
  case Command::profile: return "profile";
  case Command::expect: return "expect";
  case Command::validate: return "validate";
  case Command::sweep: return "sweep";
  case Command::linear: return "linear";
  }
  return "unknown";
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    double v = 0.0;
    if (!parse_double(text.substr(0, comma), v)) throw ParameterError("--widths: cannot parse list");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void validate_run_config(const RunConfig& run) {
  if (!std::isfinite(run.p_over_m) || run.p_over_m < 0.0) throw ParameterError("--p: must be >= 0");
  if (!std::isfinite(run.theta0) || run.theta0 < 0.0 || run.theta0 > kPi / 2 + 1e-15) {
    throw ParameterError("--theta0: must lie in [0, pi/2]");
  }
  if (run.s != 0.5 && run.s != -0.5) throw ParameterError("--s: must be +-1/2");
  if (!(run.xi_max > 0.0) || !std::isfinite(run.xi_max)) throw ParameterError("--xi-max: must be > 0");
  if (run.n_points < 2) throw ParameterError("--points: must be >= 2");
  if (run.command == Command::linear) {
    if (run.widths.size() < 3) throw ParameterError("--widths: need at least 3 widths");
    for (std::size_t i = 0; i < run.widths.size(); ++i) {
      if (!(run.widths[i] > 0.0) || (i > 0 && run.widths[i] <= run.widths[i - 1])) {
        throw ParameterError("--widths: must be positive and strictly increasing");
      }
    }
    if (run.p_over_m == 0.0 || run.theta0 == 0.0) {
      throw ParameterError("--p/--theta0: linear densities need a nonzero transverse momentum");
    }
  }
  if (run.command == Command::sweep) {
    for (const SweepRange* r : {&run.sweep_p, &run.sweep_theta}) {
      if (r->steps < 1) throw ParameterError("--p-steps/--theta-steps: must be >= 1");
      if (!std::isfinite(r->min) || !std::isfinite(r->max) || r->max < r->min) {
        throw ParameterError("sweep range: need finite min <= max");
      }
    }
    if (run.sweep_p.min < 0.0) throw ParameterError("--p-min: must be >= 0");
    if (run.sweep_theta.min < 0.0 || run.sweep_theta.max > kPi / 2 + 1e-15) {
      throw ParameterError("--theta-min/--theta-max: must lie in [0, pi/2]");
    }
  }
}

bool Document::gating_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.gating; });
}

ExpectationRow expectation_row(double p_over_m, double theta0, int ell, double s) {
  const BeamConfig cfg = beam_config(p_over_m, theta0, ell, s);
  ExpectationRow row;
  row.p_over_m = p_over_m;
  row.theta0 = theta0;
  row.ell = ell;
  row.s = s;
  row.delta = cfg.delta;
  row.energy = cfg.energy;
  row.report = beam_expectations(cfg);
  return row;
}

Document cmd_profile(const RunConfig& run) {
  validate_run_config(run);
  Document doc;
  doc.params = base_params(run);
  doc.params["xi_max"] = run.xi_max;
  doc.params["n_points"] = run.n_points;
  doc.params["pair"] = run.pair;
  add_derived(doc.params, beam_config(run.p_over_m, run.theta0, run.ell, run.s));

  const auto grid = uniform_grid(run.xi_max, static_cast<std::size_t>(run.n_points));
  const std::vector<double> spins = run.pair ? std::vector<double>{0.5, -0.5} : std::vector<double>{run.s};
  if (run.pair) doc.columns = {"s", "xi", "rho", "j_z", "j_phi"};
  else doc.columns = {"xi", "rho", "j_z", "j_phi"};

  for (double s : spins) {
    const auto cfg = beam_config(run.p_over_m, run.theta0, run.ell, s);
    const auto prof = density_profile(cfg, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> r{prof.xi[i], prof.rho[i], prof.j_z[i], prof.j_phi[i]};
      if (run.pair) r.insert(r.begin(), s);
      doc.rows.push_back(std::move(r));
    }
    const std::string tag = s > 0 ? "+" : "-";
    const auto peak = std::max_element(prof.rho.begin(), prof.rho.end()) - prof.rho.begin();
    doc.summary["rho_axis_s" + tag] = prof.rho.front();
    doc.summary["rho_peak_xi_s" + tag] = prof.xi[static_cast<std::size_t>(peak)];
  }
  return doc;
}

Document cmd_expect(const RunConfig& run) {
  validate_run_config(run);
  const ExpectationRow row = expectation_row(run.p_over_m, run.theta0, run.ell, run.s);
  Document doc;
  doc.params = base_params(run);
  add_derived(doc.params, beam_config(run.p_over_m, run.theta0, run.ell, run.s));
  doc.params["units"] = "hbar = c = m = 1; M_z in e hbar / 2E";

  const auto& r = row.report;
  doc.label_column = "quantity";
  doc.columns = {"closed_form", "numeric", "delta"};
  const auto add = [&](const char* name, double closed, double numeric) {
    doc.labels.emplace_back(name);
    doc.rows.push_back({closed, numeric, numeric - closed});
  };
  add("L_z", r.L_z, r.L_z_numeric);
  add("S_z", r.S_z, r.S_z_numeric);
  add("M_z", r.M_z, r.M_z_numeric);
  add("berry_phase", r.berry_phase, r.berry_phase_numeric);
  add("k_perp_R", r.caustic_radius, r.caustic_radius_numeric);

  doc.checks.push_back(make_check("L_z_numeric_vs_closed", r.L_z_numeric, r.L_z, 1e-10));
  doc.checks.push_back(make_check("S_z_numeric_vs_closed", r.S_z_numeric, r.S_z, 1e-10));
  doc.checks.push_back(make_check("am_conservation", r.L_z + r.S_z, run.ell + run.s, 1e-12));
  doc.checks.push_back(make_check("berry_phase_numeric_vs_closed", r.berry_phase_numeric, r.berry_phase, 1e-8));
  return doc;
}

Document cmd_sweep(const RunConfig& run) {
  validate_run_config(run);
  const auto ps = run.sweep_p.values();
  const auto thetas = run.sweep_theta.values();
  const std::vector<double> spins = run.both_spins ? std::vector<double>{0.5, -0.5} : std::vector<double>{run.s};

  struct Key {
    double p, theta, s;
  };
  std::vector<Key> keys;
  for (double p : ps)
    for (double th : thetas)
      for (double s : spins) keys.push_back({p, th, s});

  std::vector<ExpectationRow> rows(keys.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(keys.size() / 8, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < keys.size(); i += workers) {
          rows[i] = expectation_row(keys[i].p, keys[i].theta, run.ell, keys[i].s);
        }
      });
    }
  }

  Document doc;
  doc.params = base_params(run);
  doc.params.erase("p_over_m");
  doc.params.erase("theta0");
  doc.params["p_range"] = {run.sweep_p.min, run.sweep_p.max, run.sweep_p.steps};
  doc.params["theta_range"] = {run.sweep_theta.min, run.sweep_theta.max, run.sweep_theta.steps};
  doc.params["both_spins"] = run.both_spins;
  doc.columns = {"p_over_m", "theta0",      "ell",        "s",           "delta",      "energy",
                 "L_z",      "S_z",         "M_z",        "berry_phase", "k_perp_R",   "L_z_numeric",
                 "S_z_numeric", "M_z_numeric", "berry_phase_numeric"};
  double worst_conservation = 0.0;
  for (const auto& r : rows) {
    const auto& e = r.report;
    doc.rows.push_back({r.p_over_m, r.theta0, static_cast<double>(r.ell), r.s, r.delta, r.energy, e.L_z, e.S_z,
                        e.M_z, e.berry_phase, e.caustic_radius, e.L_z_numeric, e.S_z_numeric, e.M_z_numeric,
                        e.berry_phase_numeric});
    worst_conservation = std::max(worst_conservation, std::abs(e.L_z + e.S_z - (r.ell + r.s)));
  }
  doc.checks.push_back(make_check("am_conservation_worst", worst_conservation, 0.0, 1e-12));
  return doc;
}

Document cmd_linear(const RunConfig& run) {
  validate_run_config(run);
  const auto cfg = beam_config(run.p_over_m, run.theta0, run.ell, run.s);
  Document doc;
  doc.params = base_params(run);
  add_derived(doc.params, cfg);
  doc.params["widths"] = run.widths;
  doc.params["radial_nodes"] = run.radial_nodes;
  doc.params["units"] = "widths in 1/k_perp; hbar = c = m = 1";

  const auto rep = linear_expectations(cfg, run.widths, run.radial_nodes);
  doc.columns = {"width", "L_z", "S_z", "M_z"};
  for (const auto& m : rep.per_width) doc.rows.push_back({m.width, m.L_z, m.S_z, m.M_z});

  const auto extrap = [](const Extrapolation& e) {
    return nlohmann::json{{"value", e.value},
                          {"slope", e.slope},
                          {"residual", e.residual},
                          {"last_increment", e.last_increment},
                          {"error", e.error}};
  };
  doc.summary["L_z_bar"] = extrap(rep.L_z_bar);
  doc.summary["S_z_bar"] = extrap(rep.S_z_bar);
  doc.summary["M_z_bar"] = extrap(rep.M_z_bar);

  const double ds = cfg.delta * run.s;
  doc.checks.push_back(make_check("L_z_bar_vs_l+delta*s", rep.L_z_bar.value, rep.expected_L_z, 1e-3));
  doc.checks.push_back(make_check("S_z_bar_vs_s", rep.S_z_bar.value, rep.expected_S_z, 1e-3, false,
                                  "canonical Sigma_z extrapolates to s - delta s"));
  doc.checks.push_back(make_check("S_z_bar_vs_s-delta*s", rep.S_z_bar.value, run.s - ds, 1e-3));
  doc.checks.push_back(make_check("M_z_bar_vs_l+2s", rep.M_z_bar.value, rep.moment_candidate, 1e-3, false,
                                  "moment candidate"));
  doc.checks.push_back(make_check("M_z_bar_vs_l+2s+delta*s", rep.M_z_bar.value, rep.moment_candidate_soi, 1e-3,
                                  false, "moment candidate"));
  doc.checks.push_back(make_check("M_z_bar_vs_l+s", rep.M_z_bar.value, run.ell + run.s, 1e-3, false,
                                  "observed limit of the enveloped moment integral"));
  return doc;
}

Document cmd_validate(const RunConfig& run) {
  ValidationOptions opts;
  opts.quick = run.quick;
  opts.inject_fault = run.inject_fault;
  const ValidationReport rep = run_validation(opts);
  Document doc;
  doc.params["command"] = "validate";
  doc.params["quick"] = run.quick;
  doc.params["inject_fault"] = run.inject_fault;
  for (const auto& c : rep.checks) {
    Check k;
    k.name = c.name;
    k.value = c.residual;
    k.reference = 0.0;
    k.residual = c.residual;
    k.tolerance = c.tolerance;
    k.passed = c.passed;
    k.gating = c.gating;
    k.note = c.note;
    doc.checks.push_back(std::move(k));
  }
  doc.summary["all_passed"] = rep.all_passed();
  doc.summary["n_checks"] = rep.checks.size();
  return doc;
}

Document run_command(const RunConfig& run) {
  switch (run.command) {
  case Command::profile: return cmd_profile(run);
  case Command::expect: return cmd_expect(run);
  case Command::validate: return cmd_validate(run);
  case Command::sweep: return cmd_sweep(run);
  case Command::linear: return cmd_linear(run);
  }
  throw ParameterError("unknown command");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Document& doc, std::ostream& os) {
  os << "# evb " << kToolVersion << '\n';
  os << "# units: hbar = c = m = 1; momenta in units of m; angles in radians; xi = k_perp r\n";
  for (const auto& [key, value] : doc.params.items()) {
    os << "# param " << key << ": " << (value.is_number_float() ? format_number(value.get<double>()) : value.dump())
       << '\n';
  }
  for (const auto& [key, value] : doc.summary.items()) {
    os << "# summary " << key << ": " << value.dump() << '\n';
  }
  for (const auto& c : doc.checks) {
    os << "# check " << c.name << ": residual=" << format_number(c.residual)
       << " tolerance=" << format_number(c.tolerance) << ' ' << (c.passed ? "PASS" : "FAIL")
       << (c.gating ? "" : " (informational)") << '\n';
  }
  bool first = true;
  if (!doc.label_column.empty()) {
    os << doc.label_column;
    first = false;
  }
  for (const auto& col : doc.columns) {
    os << (first ? "" : ",") << col;
    first = false;
  }
  os << '\n';
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    first = true;
    if (!doc.label_column.empty()) {
      os << doc.labels[i];
      first = false;
    }
    for (double v : doc.rows[i]) {
      os << (first ? "" : ",") << format_number(v);
      first = false;
    }
    os << '\n';
  }
}

nlohmann::json to_json(const Document& doc) {
  nlohmann::json j;
  j["version"] = kToolVersion;
  j["params"] = doc.params;
  nlohmann::json results;
  std::vector<std::string> cols;
  if (!doc.label_column.empty()) cols.push_back(doc.label_column);
  cols.insert(cols.end(), doc.columns.begin(), doc.columns.end());
  results["columns"] = cols;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    if (!doc.label_column.empty()) row.push_back(doc.labels[i]);
    for (double v : doc.rows[i]) row.push_back(v);
    rows.push_back(std::move(row));
  }
  results["rows"] = std::move(rows);
  results["summary"] = doc.summary;
  j["results"] = std::move(results);
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : doc.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"reference", c.reference},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"gating", c.gating},
                      {"note", c.note}});
  }
  j["checks"] = std::move(checks);
  return j;
}

void write_document(const Document& doc, Format format, std::ostream& os) {
  if (format == Format::csv) write_csv(doc, os);
  else os << to_json(doc).dump(2) << '\n';
}

int execute(const RunConfig& run, std::ostream& out, std::ostream& err) {
  Document doc;
  try {
    doc = run_command(run);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const DomainError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const std::invalid_argument& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const NumericalQualityError& e) {
    err << "numerical quality error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (run.out.empty()) {
      write_document(doc, run.format, out);
      out.flush();
      if (!out) throw IoError("failed writing to output stream");
    } else {
      std::ofstream f(run.out);
      if (!f) throw IoError("cannot open --out path: " + run.out);
      write_document(doc, run.format, f);
      f.close();
      if (!f) throw IoError("failed writing --out path: " + run.out);
    }
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }

  if (run.command == Command::validate) {
    std::size_t failed = 0;
    for (const auto& c : doc.checks) failed += (!c.passed && c.gating) ? 1 : 0;
    err << "validate: " << doc.checks.size() << " checks, " << failed << " gating failures\n";
    return failed == 0 ? kExitOk : kExitValidation;
  }
  return kExitOk;
}

} // namespace evb
