// C API checks against the shared library only.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "hslab/hslab.h"

namespace {

int failures = 0;

void expect(bool ok, const char* what) {
  if (!ok) {
    ++failures;
    std::printf("FAIL: %s (last error: %s)\n", what, hslab_last_error());
  }
}

}  // namespace

int main() {
  namespace fs = std::filesystem;
  const fs::path tmp = fs::temp_directory_path() / "hslab_capi_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  expect(std::strlen(hslab_version()) > 0, "version string");
  expect(std::strcmp(hslab_status_name(HSLAB_CONFIG_INVALID), "ConfigInvalid") == 0, "status names");
  expect(std::strcmp(hslab_status_name(HSLAB_MISSING_CRITERION), "MissingCriterion") == 0, "status names");

  // null handling
  hslab_config* c = nullptr;
  expect(hslab_config_parse(nullptr, &c) == HSLAB_INVALID_ARGUMENT, "NULL text");
  expect(hslab_run(nullptr, nullptr) == HSLAB_INVALID_ARGUMENT, "NULL config");

  // ConfigInvalid names the key
  expect(hslab_config_parse("experiment = norms\nbogus = 1\n", &c) == HSLAB_CONFIG_INVALID && !c, "unknown key");
  expect(std::strstr(hslab_last_error(), "bogus") != nullptr, "error names the key");
  expect(hslab_config_parse("experiment = norms\np = abc\n", &c) == HSLAB_CONFIG_INVALID, "bad number");
  expect(std::strstr(hslab_last_error(), "'p'") != nullptr, "error names p");
  expect(hslab_config_parse("experiment = teleport\n", &c) == HSLAB_CONFIG_INVALID, "unknown experiment");
  expect(hslab_config_parse("p = 2\n", &c) == HSLAB_CONFIG_INVALID, "missing experiment");

  // a zero battery gives zero norms and passes vacuously
  expect(hslab_config_parse("experiment = norms\nbattery = zero\np = 2\nk = 1\ngamma = 0.5\n", &c) == HSLAB_OK, "parse");
  expect(hslab_config_set(c, "quad.n_bulk", "0") == HSLAB_CONFIG_INVALID, "quad guard");
  expect(std::strcmp(hslab_config_get(c, "quad.n_bulk") ? "set" : "unset", "unset") == 0, "rejected override not kept");
  expect(hslab_config_set(c, "quad.n_bulk", "20") == HSLAB_OK, "quad override");
  expect(std::strcmp(hslab_config_get(c, "quad.n_bulk"), "20") == 0, "get");
  hslab_report* r = nullptr;
  expect(hslab_run(c, &r) == HSLAB_OK && r, "run");
  expect(hslab_report_row_count(r) == 4, "four norm rows");
  for (size_t i = 0; i < hslab_report_row_count(r); ++i) {
    hslab_row row;
    expect(hslab_report_row(r, i, &row) == HSLAB_OK, "row");
    expect(row.numeric == 0.0 && std::strcmp(row.value, "0") == 0, "zero norm");
    expect(row.status == HSLAB_ROW_INFO, "info row");
  }
  hslab_row dummy;
  expect(hslab_report_row(r, 99, &dummy) == HSLAB_INVALID_ARGUMENT, "row range");
  expect(hslab_report_passed(r), "vacuous pass");
  expect(std::strncmp(hslab_report_csv(r), "key,metric,value,tolerance,status\n", 34) == 0, "CSV header");
  expect(std::strstr(hslab_report_metadata(r), "\"n_bulk\": 20") != nullptr, "metadata echoes quadrature");
  const std::string csv = (tmp / "sub" / "norms.csv").string();
  expect(hslab_report_write(r, csv.c_str()) == HSLAB_OK, "write");
  expect(fs::exists(csv) && fs::exists(csv + ".meta.json"), "CSV and sidecar written");
  hslab_report_free(r);
  hslab_config_free(c);

  // a module error is a failed row, not an error status
  expect(hslab_config_parse("experiment = blowup\nbc = dirichlet\np = 2\ngamma = 2\ncriterion = 5\n", &c) == HSLAB_OK,
         "parse blowup");
  expect(hslab_run(c, &r) == HSLAB_OK, "run with module error");
  expect(!hslab_report_passed(r), "failed row");
  hslab_row row;
  hslab_report_row(r, 0, &row);
  expect(row.status == HSLAB_ROW_FAIL && std::strcmp(row.value, "HypothesisViolated") == 0 && row.criterion == 5,
         "error row carries the code and criterion");
  expect(std::isnan(row.numeric), "error row is not numeric");
  hslab_report_free(r);
  hslab_config_free(c);

  // acceptance: empty dir → MissingCriterion; a single-criterion dir → one row
  hslab_summary* s = nullptr;
  const fs::path empty = tmp / "empty";
  fs::create_directories(empty);
  expect(hslab_acceptance(empty.string().c_str(), nullptr, &s) == HSLAB_MISSING_CRITERION && !s, "empty dir");
  expect(std::strstr(hslab_last_error(), "1,2,3,4,5,6,7,8,9,10,11,12") != nullptr, "all ids listed");
  const fs::path one = tmp / "one";
  fs::create_directories(one);
  std::ofstream(one / "hardy.cfg") << "experiment = hardy\ncriterion = 10\np = 2\n";
  hslab_acceptance_options o{};
  o.require_all = 1;
  o.jobs = 1;
  const std::string out = (tmp / "out").string();
  o.out_dir = out.c_str();
  expect(hslab_acceptance(one.string().c_str(), &o, &s) == HSLAB_MISSING_CRITERION, "strict mode rejects partial dir");
  o.require_all = 0;
  expect(hslab_acceptance(one.string().c_str(), &o, &s) == HSLAB_OK && s, "partial acceptance");
  expect(hslab_summary_row_count(s) == 1, "one row");
  hslab_criterion_row cr;
  expect(hslab_summary_row(s, 0, &cr) == HSLAB_OK && cr.id == 10 && cr.passed && cr.rows > 0, "hardy criterion passes");
  expect(std::strcmp(hslab_summary_missing(s), "1,2,3,4,5,6,7,8,9,11,12") == 0, "missing ids");
  expect(hslab_summary_passed(s), "covered criteria pass");
  expect(fs::exists(tmp / "out" / "hardy.csv"), "per-config CSV");
  hslab_summary_free(s);

  fs::remove_all(tmp);
  std::printf("%s: %d failure(s)\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
