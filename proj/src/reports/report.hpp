#pragma once
#include <string>
#include <vector>

#include "reports/config.hpp"

namespace hsl {

enum class RowStatus { pass, fail, info };
const char* row_status_name(RowStatus s);

// One CSV row. Pass/fail rows carry the acceptance criterion they implement.
struct ReportRow {
  std::string key;
  std::string metric;
  double value = 0;
  std::string text;       // non-empty: printed instead of value (verdicts, error names)
  std::string tolerance;  // human-readable rule, e.g. "<= 1e-06"
  RowStatus status = RowStatus::info;
  int criterion = 0;      // 0 for info rows
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  RunConfig config;
  QuadratureSpec quad;
  std::vector<std::pair<std::string, std::string>> certificates;  // free-form, written to the sidecar
  double runtime_seconds = 0;  // sidecar only, keeps the CSV reproducible

  bool passed() const;  // every pass/fail row passes
  std::size_t failures() const;

  // rows appended through these compute their own status
  void info(const std::string& key, const std::string& metric, double value);
  void note(const std::string& key, const std::string& metric, const std::string& text);
  void verdict(const std::string& key, const std::string& metric, const std::string& text, bool ok, int criterion,
               const std::string& rule);
  void at_most(int criterion, const std::string& key, const std::string& metric, double value, double bound);
  void at_least(int criterion, const std::string& key, const std::string& metric, double value, double bound);
  void within(int criterion, const std::string& key, const std::string& metric, double value, double target,
              double tol);
  void error(int criterion, const std::string& key, const std::string& what, const std::string& code);
  void certify(const std::string& name, const std::string& value) { certificates.emplace_back(name, value); }
};

// 17 significant digits, "nan"/"inf" spelled out
std::string format_double(double v);
std::string csv_escape(const std::string& s);

// header "key,metric,value,tolerance,status"
std::string report_csv(const ExperimentReport& r);
// config echo with resolved defaults, quadrature, certificates, version, runtime
std::string report_metadata_json(const ExperimentReport& r);
// writes path and path + ".meta.json", creating parent directories
void write_report(const ExperimentReport& r, const std::string& path);

const char* lab_version();

}  // namespace hsl
