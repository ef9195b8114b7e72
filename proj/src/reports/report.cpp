#include "reports/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "json.hpp"

namespace hsl {

namespace {

// shortest round-trip form, for the human-readable tolerance column
std::string short_double(double v) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string rule(const char* op, double b) { return std::string(op) + " " + short_double(b); }

ReportRow make(int criterion, const std::string& key, const std::string& metric, double value, bool ok,
               std::string tol) {
  ReportRow r;
  r.key = key;
  r.metric = metric;
  r.value = value;
  r.tolerance = std::move(tol);
  // NaN never passes
  r.status = ok && !std::isnan(value) ? RowStatus::pass : RowStatus::fail;
  r.criterion = criterion;
  return r;
}

}  // namespace

const char* lab_version() { return "hslab 1.0.0"; }

const char* row_status_name(RowStatus s) {
  switch (s) {
    case RowStatus::pass: return "PASS";
    case RowStatus::fail: return "FAIL";
    case RowStatus::info: return "INFO";
  }
  return "?";
}

bool ExperimentReport::passed() const { return failures() == 0; }

std::size_t ExperimentReport::failures() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.status == RowStatus::fail;
  return n;
}

void ExperimentReport::info(const std::string& key, const std::string& metric, double value) {
  ReportRow r;
  r.key = key;
  r.metric = metric;
  r.value = value;
  rows.push_back(r);
}

void ExperimentReport::note(const std::string& key, const std::string& metric, const std::string& text) {
  info(key, metric, 0.0);
  rows.back().text = text;
}

void ExperimentReport::verdict(const std::string& key, const std::string& metric, const std::string& text, bool ok,
                               int criterion, const std::string& rl) {
  ReportRow r = make(criterion, key, metric, 0.0, ok, rl);
  r.text = text;
  rows.push_back(r);
}

void ExperimentReport::at_most(int c, const std::string& key, const std::string& metric, double v, double b) {
  rows.push_back(make(c, key, metric, v, v <= b, rule("<=", b)));
}

void ExperimentReport::at_least(int c, const std::string& key, const std::string& metric, double v, double b) {
  rows.push_back(make(c, key, metric, v, v >= b, rule(">=", b)));
}

void ExperimentReport::within(int c, const std::string& key, const std::string& metric, double v, double target,
                              double tol) {
  rows.push_back(make(c, key, metric, v, std::abs(v - target) <= tol, short_double(target) + " +- " + short_double(tol)));
}

void ExperimentReport::error(int c, const std::string& key, const std::string& what, const std::string& code) {
  ReportRow r = make(c, key, "error", std::nan(""), false, what);
  r.text = code;
  rows.push_back(r);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string report_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "key,metric,value,tolerance,status\n";
  for (const auto& row : r.rows) {
    std::string key = row.key;
    if (row.criterion > 0) key = "C" + std::to_string(row.criterion) + ":" + key;
    os << csv_escape(key) << ',' << csv_escape(row.metric) << ','
       << csv_escape(row.text.empty() ? format_double(row.value) : row.text) << ',' << csv_escape(row.tolerance)
       << ',' << row_status_name(row.status) << '\n';
  }
  return os.str();
}

std::string report_metadata_json(const ExperimentReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["version"] = lab_version();
  j["experiment"] = r.experiment;
  j["config_origin"] = r.config.origin();
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config.entries()) cfg[k] = v;
  j["config"] = cfg;
  const QuadratureSpec& q = r.quad;
  j["quadrature"] = {{"jacobi_exponent", std::isnan(q.jacobi_exponent) ? "auto" : format_double(q.jacobi_exponent)},
                     {"n_boundary", q.n_boundary},
                     {"n_bulk", q.n_bulk},
                     {"r_max", format_double(q.r_max)},
                     {"tail_tol", format_double(q.tail_tol)},
                     {"grading_levels", q.grading_levels},
                     {"n_tangential", q.n_tangential}};
  ordered_json cert = ordered_json::object();
  for (const auto& [k, v] : r.certificates) cert[k] = v;
  j["certificates"] = cert;
  j["rows"] = r.rows.size();
  j["failures"] = r.failures();
  j["passed"] = r.passed();
  j["runtime_seconds"] = r.runtime_seconds;
  return j.dump(2) + "\n";
}

void write_report(const ExperimentReport& r, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto put = [](const std::string& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + file + "'");
    out << text;
  };
  put(path, report_csv(r));
  put(path + ".meta.json", report_metadata_json(r));
}

}  // namespace hsl
