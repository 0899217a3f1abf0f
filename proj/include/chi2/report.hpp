#pragma once
// Machine-readable verification reports: named checks with measured values
// and tolerances, grouped into suites and serialized as deterministic JSON.
// Reports carry no timestamps, so identical runs produce byte-identical
// files; wall time is for the console, not the report.

#include <string>
#include <vector>

namespace chi2 {

struct CheckResult {
  std::string id;
  std::string anchor;  // what the measured value is compared against
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool overall_pass() const;

  // Record a comparison `measured <= tolerance`.
  CheckResult& add(std::string id, std::string anchor, double measured,
                   double tolerance);
  // Record an externally decided outcome with an informational value.
  CheckResult& add_flag(std::string id, std::string anchor, bool pass,
                        double measured = 0.0);
};

std::string report_to_json(const SuiteReport& r);

// Write <suite>.json under CHI2_REPORT_DIR (default: the current working
// directory).  Returns the path written.
std::string write_report(const SuiteReport& r);

// Directory reports and data files go to (CHI2_REPORT_DIR or ".").
std::string report_directory();

}  // namespace chi2
