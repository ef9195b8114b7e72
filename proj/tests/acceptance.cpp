// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "hslab/hslab.h"

namespace {

void line(const hslab_criterion_row* r, void*) {
  std::printf("%s  criterion %2d  %-45s %7.1f s  (budget %g s%s)  rows %zu, failed %zu\n", r->passed ? "PASS" : "FAIL",
              r->id, r->title, r->runtime_seconds, r->budget_seconds, r->over_budget ? ", OVER" : "", r->rows,
              r->failed_rows);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <config-dir> [out-dir]\n");
    return 2;
  }
  std::string out = argc > 2 ? argv[2] : "";
  if (out.empty()) {
    const char* env = std::getenv("LAB_OUT_DIR");
    out = env && *env ? env : "acceptance_out";
  }
  hslab_acceptance_options o{};
  o.out_dir = out.c_str();
  o.require_all = 1;
  o.jobs = 1;
  o.progress = line;
  hslab_summary* s = nullptr;
  const hslab_status st = hslab_acceptance(argv[1], &o, &s);
  if (st == HSLAB_MISSING_CRITERION) {
    std::printf("FAIL  %s\n", hslab_last_error());
    return 1;
  }
  if (st != HSLAB_OK) {
    std::printf("FAIL  %s: %s\n", hslab_status_name(st), hslab_last_error());
    return 1;
  }
  std::ofstream(out + "/acceptance.csv") << hslab_summary_csv(s);
  const bool ok = hslab_summary_passed(s);
  const double total = hslab_summary_runtime(s);
  // full-suite budget: 15 minutes
  const bool in_budget = total <= 900.0;
  std::printf("%s  full suite %.1f s (budget 900 s)\n", in_budget ? "PASS" : "FAIL", total);
  std::printf("%s: %zu criteria\n", ok && in_budget ? "ALL PASS" : "FAILED", hslab_summary_row_count(s));
  hslab_summary_free(s);
  return ok && in_budget ? 0 : 1;
}
