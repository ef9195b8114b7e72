// lab: run one experiment config or a directory of acceptance configs.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "hslab/hslab.h"

namespace {

const char* kQuadKeys[] = {"jacobi_exponent", "n_boundary", "n_bulk", "r_max", "tail_tol", "grading_levels",
                           "n_tangential"};

struct Overrides {
  std::map<std::string, std::string> quad;
  long seed = -1;

  void add_to(CLI::App* app) {
    for (const char* k : kQuadKeys)
      app->add_option(std::string("--quad.") + k, quad[k], std::string("override quad.") + k);
    app->add_option("--seed", seed, "battery shuffling seed (numerics are deterministic)")->check(CLI::NonNegativeNumber);
  }

  // applies the set overrides; returns false after printing the error
  bool apply(hslab_config* c) const {
    for (const auto& [k, v] : quad) {
      if (v.empty()) continue;
      if (hslab_config_set(c, ("quad." + k).c_str(), v.c_str()) != HSLAB_OK) {
        std::fprintf(stderr, "lab: %s\n", hslab_last_error());
        return false;
      }
    }
    if (seed >= 0 && hslab_config_set(c, "seed", std::to_string(seed).c_str()) != HSLAB_OK) {
      std::fprintf(stderr, "lab: %s\n", hslab_last_error());
      return false;
    }
    return true;
  }
};

int cmd_run(const std::string& path, const std::string& out, const Overrides& ov, bool quiet) {
  hslab_config* cfg = nullptr;
  if (hslab_config_load(path.c_str(), &cfg) != HSLAB_OK) {
    std::fprintf(stderr, "lab: %s\n", hslab_last_error());
    return 2;
  }
  if (!ov.apply(cfg) || (!out.empty() && hslab_config_set(cfg, "output", out.c_str()) != HSLAB_OK)) {
    if (!out.empty()) std::fprintf(stderr, "lab: %s\n", hslab_last_error());
    hslab_config_free(cfg);
    return 2;
  }
  hslab_report* rep = nullptr;
  const hslab_status st = hslab_run(cfg, &rep);
  hslab_config_free(cfg);
  if (st != HSLAB_OK) {
    std::fprintf(stderr, "lab: %s\n", hslab_last_error());
    return 2;
  }
  size_t failed = 0;
  const size_t n = hslab_report_row_count(rep);
  for (size_t i = 0; i < n; ++i) {
    hslab_row r;
    hslab_report_row(rep, i, &r);
    failed += r.status == HSLAB_ROW_FAIL;
    if (!quiet && r.status != HSLAB_ROW_INFO)
      std::printf("%-4s %s  %s = %s  (%s)\n", r.status == HSLAB_ROW_PASS ? "PASS" : "FAIL", r.key, r.metric, r.value,
                  r.tolerance);
  }
  int code = hslab_report_passed(rep) ? 0 : 1;
  if (hslab_report_write(rep, nullptr) != HSLAB_OK) {
    std::fprintf(stderr, "lab: %s\n", hslab_last_error());
    code = 2;
  } else {
    std::printf("%zu rows, %zu failed, %.1f s -> %s\n", n, failed, hslab_report_runtime(rep),
                hslab_report_output_path(rep));
  }
  hslab_report_free(rep);
  return code;
}

void print_criterion(const hslab_criterion_row* r, void*) {
  std::printf("%s  C%-2d %-45s %7.1f s (budget %g s)%s  [%s]\n", r->passed ? "PASS" : "FAIL", r->id, r->title,
              r->runtime_seconds, r->budget_seconds, r->over_budget ? " OVER BUDGET" : "", r->configs);
  std::fflush(stdout);
}

int cmd_acceptance(const std::string& dir, std::string out, const Overrides& ov, bool partial, int jobs) {
  if (out.empty()) {
    const char* env = std::getenv("LAB_OUT_DIR");
    out = env && *env ? env : "lab_out";
  }
  hslab_config* over = nullptr;
  hslab_config_new(&over);
  if (!ov.apply(over)) {
    hslab_config_free(over);
    return 2;
  }
  hslab_acceptance_options o{};
  o.out_dir = out.c_str();
  o.require_all = partial ? 0 : 1;
  o.jobs = jobs;
  o.overrides = over;
  o.progress = print_criterion;
  hslab_summary* s = nullptr;
  const hslab_status st = hslab_acceptance(dir.c_str(), &o, &s);
  hslab_config_free(over);
  if (st != HSLAB_OK) {
    std::fprintf(stderr, "lab: %s\n", hslab_last_error());
    return 2;
  }
  if (*hslab_summary_missing(s)) std::printf("MISSING criteria: %s\n", hslab_summary_missing(s));
  const std::string csv = (std::filesystem::path(out) / "acceptance.csv").string();
  std::ofstream(csv) << hslab_summary_csv(s);
  const int code = hslab_summary_passed(s) ? 0 : 1;
  std::printf("%s: %zu criteria in %.1f s -> %s\n", code == 0 ? "ALL PASS" : "FAILED", hslab_summary_row_count(s),
              hslab_summary_runtime(s), csv.c_str());
  hslab_summary_free(s);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hslab experiment runner (" + std::string(hslab_version()) + ")"};
  app.require_subcommand(1);

  std::string cfg_path, out;
  bool quiet = false;
  Overrides run_ov;
  auto* run = app.add_subcommand("run", "run one config; exit 0 iff every pass/fail row passes");
  run->add_option("config", cfg_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "CSV path (default: config `output`, else $LAB_OUT_DIR/<stem>.csv)");
  run->add_flag("-q,--quiet", quiet, "only the summary line");
  run_ov.add_to(run);

  std::string dir, acc_out;
  bool partial = false;
  int jobs = 1;
  Overrides acc_ov;
  auto* acc = app.add_subcommand("acceptance", "run every *.cfg in a directory, one line per criterion");
  acc->add_option("dir", dir, "config directory")->required()->check(CLI::ExistingDirectory);
  acc->add_option("--out", acc_out, "output directory (default: $LAB_OUT_DIR, else ./lab_out)");
  acc->add_flag("--allow-partial", partial, "report covered criteria instead of failing on missing ones");
  acc->add_option("--jobs", jobs, "configs run concurrently")->check(CLI::PositiveNumber);
  acc_ov.add_to(acc);

  CLI11_PARSE(app, argc, argv);
  if (*run) return cmd_run(cfg_path, out, run_ov, quiet);
  return cmd_acceptance(dir, acc_out, acc_ov, partial, jobs);
}
