#include <cmath>
#include <new>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "hslab/hslab.h"
#include "reports/experiments.hpp"

struct hslab_config {
  hsl::RunConfig cfg;
};

struct hslab_report {
  hsl::ExperimentReport rep;
  std::vector<std::string> keys, values;
  std::string csv, meta, path;
};

struct hslab_summary {
  hsl::AcceptanceSummary sum;
  std::vector<std::string> configs;
  std::string missing, csv;
};

namespace {

thread_local std::string g_last_error;

hslab_status set_error(hslab_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// every entry point funnels exceptions through here
template <class F>
hslab_status guard(F&& fn) {
  try {
    g_last_error.clear();
    fn();
    return HSLAB_OK;
  } catch (const hsl::Error& e) {
    return set_error(static_cast<hslab_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HSLAB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HSLAB_INTERNAL, e.what());
  }
}

hslab_status null_arg(const char* what) { return set_error(HSLAB_INVALID_ARGUMENT, std::string(what) + " is NULL"); }

hslab_criterion_row to_c(const hsl::CriterionResult& r, const std::string& configs) {
  hslab_criterion_row c{};
  c.id = r.id;
  c.title = r.title.c_str();
  c.passed = r.passed;
  c.over_budget = r.over_budget;
  c.runtime_seconds = r.runtime_seconds;
  c.budget_seconds = r.budget_seconds;
  c.rows = r.rows;
  c.failed_rows = r.failed_rows;
  c.configs = configs.c_str();
  return c;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
  return s;
}

}  // namespace

extern "C" {

const char* hslab_version(void) { return hsl::lab_version(); }

const char* hslab_status_name(hslab_status s) {
  if (s == HSLAB_OK) return "OK";
  if (s == HSLAB_INTERNAL) return "Internal";
  if (s >= 1 && s <= 18) return hsl::error_name(static_cast<hsl::ErrorCode>(static_cast<int>(s)));
  return "Unknown";
}

const char* hslab_last_error(void) { return g_last_error.c_str(); }

hslab_status hslab_config_load(const char* path, hslab_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new hslab_config{hsl::RunConfig::load(path)}; });
}

hslab_status hslab_config_parse(const char* text, hslab_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new hslab_config{hsl::RunConfig::parse(text)}; });
}

hslab_status hslab_config_new(hslab_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new hslab_config{}; });
}

hslab_status hslab_config_set(hslab_config* c, const char* key, const char* value) {
  if (!c) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guard([&] { c->cfg.set(key, value); });
}

const char* hslab_config_get(const hslab_config* c, const char* key) {
  if (!c || !key) return nullptr;
  const auto it = c->cfg.entries().find(key);
  return it == c->cfg.entries().end() ? nullptr : it->second.c_str();
}

void hslab_config_free(hslab_config* c) { delete c; }

hslab_status hslab_run(const hslab_config* c, hslab_report** out) {
  if (!c) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    auto* r = new hslab_report{};
    try {
      r->rep = hsl::run_experiment(c->cfg);
      for (const auto& row : r->rep.rows) {
        r->keys.push_back(row.criterion > 0 ? "C" + std::to_string(row.criterion) + ":" + row.key : row.key);
        r->values.push_back(row.text.empty() ? hsl::format_double(row.value) : row.text);
      }
      r->csv = hsl::report_csv(r->rep);
      r->meta = hsl::report_metadata_json(r->rep);
      r->path = c->cfg.output_path();
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

size_t hslab_report_row_count(const hslab_report* r) { return r ? r->rep.rows.size() : 0; }

hslab_status hslab_report_row(const hslab_report* r, size_t i, hslab_row* out) {
  if (!r) return null_arg("report");
  if (!out) return null_arg("out");
  if (i >= r->rep.rows.size()) return set_error(HSLAB_INVALID_ARGUMENT, "row index out of range");
  const auto& row = r->rep.rows[i];
  out->key = r->keys[i].c_str();
  out->metric = row.metric.c_str();
  out->value = r->values[i].c_str();
  out->numeric = row.text.empty() ? row.value : std::nan("");
  out->tolerance = row.tolerance.c_str();
  out->status = row.status == hsl::RowStatus::pass   ? HSLAB_ROW_PASS
                : row.status == hsl::RowStatus::fail ? HSLAB_ROW_FAIL
                                                     : HSLAB_ROW_INFO;
  out->criterion = row.criterion;
  return HSLAB_OK;
}

int hslab_report_passed(const hslab_report* r) { return r && r->rep.passed(); }
double hslab_report_runtime(const hslab_report* r) { return r ? r->rep.runtime_seconds : 0.0; }
const char* hslab_report_csv(const hslab_report* r) { return r ? r->csv.c_str() : ""; }
const char* hslab_report_metadata(const hslab_report* r) { return r ? r->meta.c_str() : ""; }
const char* hslab_report_output_path(const hslab_report* r) { return r ? r->path.c_str() : ""; }

hslab_status hslab_report_write(const hslab_report* r, const char* path) {
  if (!r) return null_arg("report");
  return guard([&] { hsl::write_report(r->rep, path ? std::string(path) : r->path); });
}

void hslab_report_free(hslab_report* r) { delete r; }

hslab_status hslab_acceptance(const char* dir, const hslab_acceptance_options* opt, hslab_summary** out) {
  if (!dir) return null_arg("dir");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    hsl::AcceptanceOptions o;
    if (opt) {
      if (opt->out_dir) o.out_dir = opt->out_dir;
      o.require_all = opt->require_all != 0;
      o.jobs = opt->jobs;
      if (opt->overrides)
        for (const auto& kv : opt->overrides->cfg.entries()) o.overrides.push_back(kv);
      if (opt->progress) {
        const hslab_progress_fn fn = opt->progress;
        void* user = opt->user;
        o.on_result = [fn, user](const hsl::CriterionResult& r) {
          const std::string cfgs = join(r.configs);
          const hslab_criterion_row c = to_c(r, cfgs);
          fn(&c, user);
        };
      }
    }
    auto* s = new hslab_summary{};
    try {
      s->sum = hsl::run_acceptance(dir, o);
      for (const auto& r : s->sum.rows) s->configs.push_back(join(r.configs));
      for (int id : s->sum.missing) s->missing += (s->missing.empty() ? "" : ",") + std::to_string(id);
      s->csv = hsl::acceptance_csv(s->sum);
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
  });
}

size_t hslab_summary_row_count(const hslab_summary* s) { return s ? s->sum.rows.size() : 0; }

hslab_status hslab_summary_row(const hslab_summary* s, size_t i, hslab_criterion_row* out) {
  if (!s) return null_arg("summary");
  if (!out) return null_arg("out");
  if (i >= s->sum.rows.size()) return set_error(HSLAB_INVALID_ARGUMENT, "row index out of range");
  *out = to_c(s->sum.rows[i], s->configs[i]);
  return HSLAB_OK;
}

int hslab_summary_passed(const hslab_summary* s) { return s && s->sum.passed(); }
double hslab_summary_runtime(const hslab_summary* s) { return s ? s->sum.total_seconds : 0.0; }
const char* hslab_summary_missing(const hslab_summary* s) { return s ? s->missing.c_str() : ""; }
const char* hslab_summary_csv(const hslab_summary* s) { return s ? s->csv.c_str() : ""; }
void hslab_summary_free(hslab_summary* s) { delete s; }

}  // extern "C"
