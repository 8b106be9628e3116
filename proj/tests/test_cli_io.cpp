#include "evb/cli_io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace evb;
using nlohmann::json;

namespace {

RunConfig base(Command c) {
  RunConfig run;
  run.command = c;
  run.p_over_m = 2.4;
  run.theta0 = parse_angle("45deg");
  return run;
}

std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EVB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::istringstream in(csv);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.front() != '#') out.push_back(line);
  }
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("evb_test_" + name);
}

} // namespace

TEST_CASE("angle and spin parsing") {
  CHECK(parse_angle("45deg") == doctest::Approx(kPi / 4).epsilon(1e-16));
  CHECK(parse_angle("0.5rad") == 0.5);
  CHECK(parse_angle("0.5") == 0.5);
  CHECK(parse_angle("90deg") == doctest::Approx(kPi / 2).epsilon(1e-16));
  CHECK_THROWS_AS(parse_angle("abc"), ParameterError);
  CHECK_THROWS_AS(parse_angle("45grad"), ParameterError);
  CHECK(parse_spin("+") == 0.5);
  CHECK(parse_spin("-") == -0.5);
  CHECK(parse_spin("0.5") == 0.5);
  CHECK(parse_spin("-0.5") == -0.5);
  CHECK_THROWS_AS(parse_spin("1"), ParameterError);
  CHECK(parse_list("20,30,40.5") == std::vector<double>{20, 30, 40.5});
  CHECK_THROWS_AS(parse_list("20,,30"), ParameterError);
  CHECK(parse_format("json") == Format::json);
  CHECK_THROWS_AS(parse_format("xml"), ParameterError);
}

TEST_CASE("run config validation names the offending flag") {
  auto run = base(Command::profile);
  run.n_points = 1;
  try {
    validate_run_config(run);
    FAIL("expected ParameterError");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("--points") != std::string::npos);
  }
  run = base(Command::profile);
  run.xi_max = 0.0;
  CHECK_THROWS_WITH_AS(validate_run_config(run), doctest::Contains("--xi-max"), ParameterError);
  run = base(Command::linear);
  run.widths = {30, 20, 40};
  CHECK_THROWS_WITH_AS(validate_run_config(run), doctest::Contains("--widths"), ParameterError);
}

TEST_CASE("profile: axis density for l = 1") {
  auto run = base(Command::profile);
  run.ell = 1;
  run.s = -0.5;
  const auto doc = cmd_profile(run);
  REQUIRE(doc.rows.size() == 400);
  CHECK(doc.rows[0][0] == 0.0);
  const double delta = doc.params["delta"].get<double>();
  CHECK(std::abs(doc.rows[0][1] - delta / 2) <= 1e-12);
  CHECK(std::abs(doc.rows[0][1] - 0.15385) < 1e-5);

  run.s = 0.5;
  CHECK(cmd_profile(run).rows[0][1] == 0.0);
}

TEST_CASE("profile pair mode: spin states give different curves") {
  auto run = base(Command::profile);
  run.ell = 3;
  run.pair = true;
  run.n_points = 2001;
  const auto doc = cmd_profile(run);
  REQUIRE(doc.rows.size() == 4002);
  CHECK(doc.columns == std::vector<std::string>{"s", "xi", "rho", "j_z", "j_phi"});
  double diff = 0.0;
  for (std::size_t i = 0; i < 2001; ++i) {
    CHECK(doc.rows[i][0] == 0.5);
    CHECK(doc.rows[i + 2001][0] == -0.5);
    diff = std::max(diff, std::abs(doc.rows[i][2] - doc.rows[i + 2001][2]));
  }
  CHECK(diff > 1e-3);
  const double peak_plus = doc.summary["rho_peak_xi_s+"].get<double>();
  const double peak_minus = doc.summary["rho_peak_xi_s-"].get<double>();
  MESSAGE("l = 3 first-ring peak: s=+1/2 at xi=" << peak_plus << ", s=-1/2 at xi=" << peak_minus);
  CHECK(peak_plus != peak_minus);
}

TEST_CASE("expect: closed-form table") {
  auto run = base(Command::expect);
  run.ell = 3;
  run.s = 0.5;
  const auto doc = cmd_expect(run);
  REQUIRE(doc.labels == std::vector<std::string>{"L_z", "S_z", "M_z", "berry_phase", "k_perp_R"});
  CHECK(std::abs(doc.rows[0][0] - 3.1538) < 1e-4);
  CHECK(std::abs(doc.rows[1][0] - 0.3462) < 1e-4);
  CHECK(std::abs(doc.rows[2][0] - 3.8462) < 1e-4);
  CHECK(std::abs(doc.rows[0][0] + doc.rows[1][0] - 3.5) <= 1e-12);
  CHECK(doc.gating_checks_pass());
  for (const auto& row : doc.rows) CHECK(std::abs(row[2]) <= 1e-8);

  run.theta0 = 0.0;
  const auto flat = cmd_expect(run);
  CHECK(flat.rows[0][0] == 3.0);
  CHECK(flat.rows[1][0] == 0.5);
}

TEST_CASE("json round trip is bit exact") {
  auto run = base(Command::expect);
  run.ell = -2;
  run.s = -0.5;
  run.p_over_m = 1.0 / 3.0;
  run.theta0 = 0.123456789012345678;
  const auto doc = cmd_expect(run);
  std::ostringstream os;
  write_document(doc, Format::json, os);
  const json j = json::parse(os.str());
  CHECK(bits(j["params"]["p_over_m"].get<double>()) == bits(run.p_over_m));
  CHECK(bits(j["params"]["theta0"].get<double>()) == bits(run.theta0));
  CHECK(j["params"]["ell"].get<int>() == -2);
  CHECK(j["params"]["s"].get<double>() == -0.5);
  REQUIRE(j["results"]["rows"].size() == doc.rows.size());
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    CHECK(j["results"]["rows"][i][0].get<std::string>() == doc.labels[i]);
    for (std::size_t k = 0; k < doc.rows[i].size(); ++k) {
      CHECK(bits(j["results"]["rows"][i][k + 1].get<double>()) == bits(doc.rows[i][k]));
    }
  }
  CHECK(j.contains("checks"));
  CHECK(j["checks"].is_array());
}

TEST_CASE("csv schema and 17-digit round trip") {
  auto run = base(Command::profile);
  run.n_points = 50;
  const auto doc = cmd_profile(run);
  std::ostringstream os;
  write_csv(doc, os);
  const std::string text = os.str();
  CHECK(text.rfind("# evb ", 0) == 0);
  CHECK(text.find("# units:") != std::string::npos);
  CHECK(text.find("# param p_over_m: 2.3999999999999999") != std::string::npos);
  const auto lines = data_lines(text);
  REQUIRE(lines.size() == 51);
  CHECK(lines[0] == "xi,rho,j_z,j_phi");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::size_t k = 0;
    for (std::string cell; std::getline(row, cell, ','); ++k) {
      REQUIRE(k < 4);
      CHECK(bits(std::strtod(cell.c_str(), nullptr)) == bits(doc.rows[i - 1][k]));
    }
    CHECK(k == 4);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("sweep: delta monotone in theta0 and saturating in p") {
  auto run = base(Command::sweep);
  run.sweep_p = {2.4, 2.4, 1};
  run.sweep_theta = {0.0, kPi / 2, 31};
  const auto by_theta = cmd_sweep(run);
  REQUIRE(by_theta.rows.size() == 31);
  CHECK(by_theta.rows.front()[4] == 0.0);
  for (std::size_t i = 1; i < by_theta.rows.size(); ++i) {
    CHECK(by_theta.rows[i][4] > by_theta.rows[i - 1][4]);
  }

  run.sweep_p = {0.0, 10.0, 41};
  run.sweep_theta = {kPi / 4, kPi / 4, 1};
  const auto by_p = cmd_sweep(run);
  REQUIRE(by_p.rows.size() == 41);
  CHECK(by_p.rows.front()[4] == 0.0);
  for (std::size_t i = 1; i < by_p.rows.size(); ++i) {
    CHECK(by_p.rows[i][4] > by_p.rows[i - 1][4]);
    CHECK(by_p.rows[i][4] < 0.5);
  }
  const double e = std::sqrt(101.0);
  CHECK(std::abs(by_p.rows.back()[4] - 0.5 * (1 - 1 / e)) <= 1e-15);
  CHECK(by_p.gating_checks_pass());
}

TEST_CASE("sweep corners reproduce expect bit for bit") {
  auto run = base(Command::sweep);
  run.ell = 2;
  run.both_spins = true;
  run.sweep_p = {0.7, 5.0, 3};
  run.sweep_theta = {0.2, 1.3, 4};
  const auto sweep = cmd_sweep(run);
  REQUIRE(sweep.rows.size() == 24);
  for (const auto& row : sweep.rows) {
    const bool corner_p = row[0] == 0.7 || row[0] == 5.0;
    const bool corner_t = row[1] == 0.2 || row[1] == 1.3;
    if (!corner_p || !corner_t) continue;
    auto single = base(Command::expect);
    single.p_over_m = row[0];
    single.theta0 = row[1];
    single.ell = 2;
    single.s = row[3];
    const auto e = cmd_expect(single);
    CHECK(bits(e.rows[0][0]) == bits(row[6]));
    CHECK(bits(e.rows[1][0]) == bits(row[7]));
    CHECK(bits(e.rows[2][0]) == bits(row[8]));
    CHECK(bits(e.rows[3][0]) == bits(row[9]));
    CHECK(bits(e.rows[0][1]) == bits(row[11]));
    CHECK(bits(e.rows[3][1]) == bits(row[14]));
  }
}

TEST_CASE("linear command reports extrapolations") {
  auto run = base(Command::linear);
  run.ell = 1;
  run.s = 0.5;
  const auto doc = cmd_linear(run);
  CHECK(doc.rows.size() == run.widths.size());
  const double delta = doc.params["delta"].get<double>();
  CHECK(std::abs(doc.summary["L_z_bar"]["value"].get<double>() - (1 + 0.5 * delta)) < 1e-3);
  CHECK(doc.gating_checks_pass());
  bool has_informational = false;
  for (const auto& c : doc.checks) has_informational |= !c.gating;
  CHECK(has_informational);
}

TEST_CASE("validate is deterministic and catches the injected fault") {
  RunConfig run;
  run.command = Command::validate;
  run.quick = true;
  std::ostringstream a, b, err;
  CHECK(execute(run, a, err) == kExitOk);
  CHECK(execute(run, b, err) == kExitOk);
  CHECK(a.str() == b.str());

  run.inject_fault = true;
  const auto doc = cmd_validate(run);
  bool caught = false;
  for (const auto& c : doc.checks) {
    if (c.name == "beam.closed_form_vs_quadrature") caught = !c.passed;
  }
  CHECK(caught);
  std::ostringstream c;
  CHECK(execute(run, c, err) == kExitValidation);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("expect --p 2.4 --theta0 45deg --ell 3 --s +") == 0);
  CHECK(run_cli("profile --points 1") == 1);
  CHECK(run_cli("profile --theta0 100deg") == 1);
  CHECK(run_cli("profile --s 2") == 1);
  CHECK(run_cli("profile --bogus") == 1);
  CHECK(run_cli("profile --out /nonexistent_dir/x.csv") == 3);
  CHECK(run_cli("validate --quick") == 0);
  CHECK(run_cli("validate --quick --inject-fault") == 2);
}

TEST_CASE("cli file output matches the library document") {
  const auto path = temp_path("expect.json");
  std::filesystem::remove(path);
  REQUIRE(run_cli("expect --p 2.4 --theta0 45deg --ell 3 --s 0.5 --format json --out " + path.string()) == 0);
  std::ifstream f(path);
  const json j = json::parse(f);
  auto run = base(Command::expect);
  run.ell = 3;
  run.s = 0.5;
  const auto doc = cmd_expect(run);
  CHECK(bits(j["results"]["rows"][0][1].get<double>()) == bits(doc.rows[0][0]));
  CHECK(bits(j["params"]["theta0"].get<double>()) == bits(run.theta0));
  std::filesystem::remove(path);
}
