#pragma once
#include <functional>
#include <string>
#include <vector>

#include "reports/config.hpp"
#include "reports/report.hpp"

namespace hsl {

// Runs one experiment. Module errors become failed rows; only ConfigInvalid escapes.
ExperimentReport run_experiment(const RunConfig& config);

struct CriterionInfo {
  int id;
  const char* title;
  double budget_seconds;
};
const std::vector<CriterionInfo>& acceptance_criteria();

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  bool over_budget = false;
  double runtime_seconds = 0, budget_seconds = 0;
  std::size_t rows = 0, failed_rows = 0;
  std::vector<std::string> configs;  // file stems
};

struct AcceptanceSummary {
  std::vector<CriterionResult> rows;
  std::vector<int> missing;
  double total_seconds = 0;
  bool passed() const;
};

struct AcceptanceOptions {
  std::string out_dir;        // empty: $LAB_OUT_DIR, else ./lab_out
  bool require_all = true;    // MissingCriterion if any id is uncovered
  int jobs = 1;               // configs run concurrently; results are still reported in id order
  std::vector<std::pair<std::string, std::string>> overrides;  // applied to every config
  std::function<void(const CriterionResult&)> on_result;      // called in id order
};

// Every *.cfg in dir, grouped by their `criterion` ids. MissingCriterion when nothing is
// covered, or when require_all and some id is uncovered.
AcceptanceSummary run_acceptance(const std::string& dir, const AcceptanceOptions& opt = {});

// header "criterion,title,status,runtime_s,budget_s,rows,failed_rows,configs"
std::string acceptance_csv(const AcceptanceSummary& s);

}  // namespace hsl
