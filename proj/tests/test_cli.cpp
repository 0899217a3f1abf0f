// End-to-end tests for the chi2sim command-line tool plus unit tests for the
// report-writing helpers.  The binary path arrives via the CHI2SIM_BIN
// compile definition; each invocation points CHI2_REPORT_DIR at a scratch
// directory so report artifacts can be inspected and compared byte-for-byte.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "chi2/report.hpp"

#ifndef CHI2SIM_BIN
#error "CHI2SIM_BIN must point at the chi2sim executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("chi2_cli_tests_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& report_dir) {
  const std::string cmd = "CHI2_REPORT_DIR='" + report_dir.string() + "' '" +
                          CHI2SIM_BIN + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("suite report bookkeeping and json layout") {
  chi2::SuiteReport rep;
  rep.suite = "demo";
  rep.add("small_residual", "unit test", 1e-12, 1e-10);
  rep.add("too_big", "unit test", 0.5, 1e-10);
  rep.add_flag("flag_ok", "unit test", true);

  CHECK(rep.checks.size() == 3);
  CHECK(rep.checks[0].pass);
  CHECK_FALSE(rep.checks[1].pass);
  CHECK(rep.checks[2].pass);
  CHECK(rep.checks[2].measured == 0.0);
  CHECK_FALSE(rep.overall_pass());

  const std::string text = chi2::report_to_json(rep);
  CHECK(text.back() == '\n');
  const json j = json::parse(text);
  CHECK(j.at("suite") == "demo");
  CHECK(j.at("overall_pass") == false);
  CHECK(j.at("checks").size() == 3);
  CHECK(j.at("checks")[0].at("id") == "small_residual");
  CHECK(j.at("checks")[0].at("pass") == true);
  CHECK(j.at("checks")[1].at("measured") == 0.5);
  // No clock-derived content: rendering twice gives identical bytes.
  CHECK(text == chi2::report_to_json(rep));
  CHECK(text.find("time") == std::string::npos);
}

TEST_CASE("write_report honors the report directory override") {
  const fs::path dir = fresh_dir("unit_write");
  ::setenv("CHI2_REPORT_DIR", dir.string().c_str(), 1);
  chi2::SuiteReport rep;
  rep.suite = "unit_write";
  rep.add("ok", "unit test", 0.0, 1.0);
  const std::string where = chi2::write_report(rep);
  ::unsetenv("CHI2_REPORT_DIR");

  CHECK(fs::path(where) == dir / "unit_write.json");
  CHECK(fs::exists(dir / "unit_write.json"));
  CHECK(slurp(dir / "unit_write.json") == chi2::report_to_json(rep));
}

TEST_CASE("closure subcommand writes a passing report") {
  const fs::path dir = fresh_dir("closure");
  CHECK(run_cli("closure --n 2", dir) == 0);
  const json j = json::parse(slurp(dir / "closure_n2.json"));
  CHECK(j.at("suite") == "closure_n2");
  CHECK(j.at("overall_pass") == true);
  bool saw_dimension = false;
  for (const auto& c : j.at("checks"))
    if (c.at("id") == "dimension") saw_dimension = true;
  CHECK(saw_dimension);
}

TEST_CASE("malformed option values are usage errors") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("closure --n 2 --tol not-a-number", dir) == 2);
  CHECK(run_cli("closure --n 0", dir) == 2);
  CHECK(run_cli("frobnicate", dir) == 2);
  CHECK(run_cli("", dir) == 2);
  CHECK(run_cli("--help", dir) == 0);
}

TEST_CASE("operator table parity check fails by design") {
  const fs::path dir = fresh_dir("h2");
  CHECK(run_cli("verify h2-matrices", dir) == 1);
  const json j = json::parse(slurp(dir / "h2_matrices.json"));
  CHECK(j.at("overall_pass") == false);
  int failing = 0;
  for (const auto& c : j.at("checks"))
    if (c.at("pass") == false) ++failing;
  CHECK(failing == 1);
}

TEST_CASE("reports are byte-identical across reruns") {
  const fs::path a = fresh_dir("rerun_a");
  const fs::path b = fresh_dir("rerun_b");
  CHECK(run_cli("verify lambda2z", a) == 0);
  CHECK(run_cli("verify lambda2z", b) == 0);
  CHECK(slurp(a / "lambda2z.json") == slurp(b / "lambda2z.json"));
}

TEST_CASE("trotter subcommand writes curve and report") {
  const fs::path dir = fresh_dir("trotter");
  CHECK(run_cli("trotter --n 2 --theta 0.7 --m-max 16", dir) == 0);

  const std::string csv = slurp(dir / "trotter_curve.csv");
  CHECK(csv.rfind("m,error,distance\n", 0) == 0);
  int rows = -1;  // exclude header
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 5);  // m = 1, 2, 4, 8, 16

  const json j = json::parse(slurp(dir / "trotter.json"));
  CHECK(j.at("suite") == "trotter");
  CHECK(j.at("overall_pass") == true);
}

TEST_CASE("synthesize subcommand solves a problem file deterministically") {
  const fs::path dir = fresh_dir("synth");
  const fs::path prob = dir / "doublet.json";
  std::ofstream(prob) << R"({
  "space": {"modes": [["s", 1], ["i", 1], ["p'", 1]]},
  "generators": ["G2a"],
  "constraints": [{"in": [0, 0, 1], "out": [1, 1, 0]}],
  "n_segments": 1,
  "tol": 1e-12,
  "restarts": 8
})" << "\n";
  CHECK(run_cli("synthesize --problem '" + prob.string() + "'", dir) == 0);

  const fs::path report = dir / "synthesize_doublet.json";
  const fs::path pulse = dir / "synthesize_doublet_pulse.json";
  const json rep = json::parse(slurp(report));
  CHECK(rep.at("overall_pass") == true);

  const json pj = json::parse(slurp(pulse));
  CHECK(pj.at("segments").size() == 1);
  const double duration =
      pj.at("segments")[0].at("duration").get<double>();
  CHECK(std::abs(duration - 1.5707963267948966) < 1e-9);

  const std::string first_report = slurp(report);
  const std::string first_pulse = slurp(pulse);
  CHECK(run_cli("synthesize --problem '" + prob.string() + "'", dir) == 0);
  CHECK(slurp(report) == first_report);
  CHECK(slurp(pulse) == first_pulse);
}

TEST_CASE("missing problem file is a usage error") {
  const fs::path dir = fresh_dir("missing");
  CHECK(run_cli("synthesize --problem /nonexistent/prob.json", dir) == 2);
}
