#include "chi2/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace chi2 {

using ordered_json = nlohmann::ordered_json;

bool SuiteReport::overall_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CheckResult& SuiteReport::add(std::string id, std::string anchor,
                              double measured, double tolerance) {
  CheckResult c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.measured = measured;
  c.tolerance = tolerance;
  c.pass = measured <= tolerance;
  checks.push_back(std::move(c));
  return checks.back();
}

CheckResult& SuiteReport::add_flag(std::string id, std::string anchor,
                                   bool pass, double measured) {
  CheckResult c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.measured = measured;
  c.tolerance = 0.0;
  c.pass = pass;
  checks.push_back(std::move(c));
  return checks.back();
}

std::string report_to_json(const SuiteReport& r) {
  ordered_json j;
  j["suite"] = r.suite;
  j["overall_pass"] = r.overall_pass();
  j["checks"] = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["anchor"] = c.anchor;
    jc["measured"] = c.measured;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    j["checks"].push_back(std::move(jc));
  }
  return j.dump(2) + "\n";
}

std::string report_directory() {
  const char* dir = std::getenv("CHI2_REPORT_DIR");
  return (dir != nullptr && *dir != '\0') ? std::string(dir)
                                          : std::string(".");
}

std::string write_report(const SuiteReport& r) {
  if (r.suite.empty())
    throw std::invalid_argument("write_report: suite name is empty");
  const std::filesystem::path path =
      std::filesystem::path(report_directory()) / (r.suite + ".json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("write_report: cannot open " + path.string());
  out << report_to_json(r);
  out.close();
  if (!out)
    throw std::runtime_error("write_report: failed writing " + path.string());
  return path.string();
}

}  // namespace chi2
