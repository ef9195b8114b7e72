#include "reports/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "core/errors.hpp"
#include "kernels/growth.hpp"

namespace hsl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  fail(ErrorCode::ConfigInvalid, "key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    invalid(key, "not a number: '" + v + "'");
  }
  if (pos != v.size()) invalid(key, "not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) invalid(key, "not an integer: '" + v + "'");
  return static_cast<int>(x);
}

// split on ';' at parenthesis depth 0
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ';' && depth == 0) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

// name(a,b,...) → name, args
std::pair<std::string, std::vector<double>> call_syntax(const std::string& key, const std::string& s) {
  const auto open = s.find('(');
  if (open == std::string::npos) return {trim(s), {}};
  if (s.back() != ')') invalid(key, "unbalanced parentheses in '" + s + "'");
  std::vector<double> args;
  std::stringstream ss(s.substr(open + 1, s.size() - open - 2));
  std::string item;
  while (std::getline(ss, item, ',')) args.push_back(to_double(key, trim(item)));
  return {trim(s.substr(0, open)), args};
}

const std::vector<std::string> kQuadKeys = {"quad.jacobi_exponent", "quad.n_boundary", "quad.n_bulk",
                                            "quad.r_max",          "quad.tail_tol",   "quad.grading_levels",
                                            "quad.n_tangential"};

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::norms: return "norms";
    case Experiment::hardy: return "hardy";
    case Experiment::semigroup: return "semigroup";
    case Experiment::growth: return "growth";
    case Experiment::blowup: return "blowup";
    case Experiment::sector: return "sector";
    case Experiment::hinf: return "hinf";
    case Experiment::commutators: return "commutators";
    case Experiment::elliptic: return "elliptic";
    case Experiment::scaling: return "scaling";
    case Experiment::maxreg: return "maxreg";
    case Experiment::weak: return "weak";
  }
  return "?";
}

Experiment parse_experiment(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Experiment::weak); ++i)
    if (s == experiment_name(static_cast<Experiment>(i))) return static_cast<Experiment>(i);
  invalid("experiment", "unknown experiment '" + s + "'");
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = {"experiment", "criterion", "output", "seed",  "checks", "battery",
                                  "p",          "k",         "gamma",  "d",     "bc",     "lambda_shift",
                                  "eta",        "q",         "T",      "grid.t", "grid.lambda", "grid.r"};
    k.insert(k.end(), kQuadKeys.begin(), kQuadKeys.end());
    return k;
  }();
  return keys;
}

Field parse_field(const std::string& spec, int d) {
  const auto [name, a] = call_syntax("battery", spec);
  auto want = [&](std::size_t n) {
    if (a.size() != n) invalid("battery", "'" + name + "' takes " + std::to_string(n) + " arguments");
  };
  AxialPtr ax;
  if (name == "zero") {
    want(0);
    return Field::zero(d);
  } else if (name == "exp") {
    want(1);
    ax = exp_decay(a[0]);
  } else if (name == "xexp") {
    want(2);
    ax = x_pow_exp(a[0], a[1]);
  } else if (name == "xgauss") {
    want(2);
    ax = x_pow_gauss(a[0], a[1]);
  } else if (name == "zeta") {
    want(0);
    ax = zeta_cutoff();
  } else if (name == "bump") {
    want(2);
    ax = bump(a[0], a[1]);
  } else {
    invalid("battery", "unknown field '" + name + "'");
  }
  if (d == 1) return Field::axial(ax);
  return Field::separable(ax, std::vector<Tangential1D>(d - 1, Tangential1D::gaussian(1.0)));
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig c;
  c.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigInvalid, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (c.raw_.count(key)) invalid(key, "duplicate key");
    c.check_and_store(key, trim(line.substr(eq + 1)));
  }
  if (!c.has("experiment")) invalid("experiment", "missing");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigInvalid, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) { check_and_store(key, trim(value)); }

void RunConfig::check_and_store(const std::string& key, const std::string& value) {
  const auto& keys = known_config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) invalid(key, "unknown key");
  if (value.empty()) invalid(key, "empty value");
  const auto old = raw_.find(key);
  const std::optional<std::string> prev = old == raw_.end() ? std::nullopt : std::optional(old->second);
  raw_[key] = value;
  // validate eagerly so the offending key is the one reported
  try {
    if (key == "experiment") parse_experiment(value);
    else if (key == "criterion") criteria();
    else if (key == "bc") parse_boundary(value);
    else if (key == "k" || key == "d" || key == "seed") integer(key, 0);
    else if (key == "p" || key == "gamma" || key == "lambda_shift" || key == "eta" || key == "q" || key == "T")
      num(key, 0);
    else if (key.rfind("grid.", 0) == 0) grid(key, {});
    else if (key.rfind("quad.", 0) == 0) quad_unchecked().validate();
    else if (key == "battery") battery({});
    if (key == "p" || key == "k" || key == "d" || key == "gamma") {
      try {
        space({}).validate(false);
      } catch (const Error& e) {
        invalid(key, e.what());
      }
    }
  } catch (const Error& e) {
    if (prev) raw_[key] = *prev;
    else raw_.erase(key);
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    invalid(key, e.what());
  }
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  const auto it = raw_.find(key);
  if (it == raw_.end()) return std::nullopt;
  return it->second;
}

Experiment RunConfig::experiment() const { return parse_experiment(str("experiment", "")); }

std::vector<int> RunConfig::criteria() const {
  std::vector<int> out;
  for (const auto& s : list("criterion", {})) {
    const int c = to_int("criterion", s);
    if (c < 1 || c > 12) invalid("criterion", "ids run from 1 to 12");
    out.push_back(c);
  }
  return out;
}

double RunConfig::num(const std::string& key, double def) const {
  const auto v = get(key);
  return v ? to_double(key, *v) : def;
}

int RunConfig::integer(const std::string& key, int def) const {
  const auto v = get(key);
  return v ? to_int(key, *v) : def;
}

std::string RunConfig::str(const std::string& key, const std::string& def) const { return get(key).value_or(def); }

std::vector<std::string> RunConfig::list(const std::string& key, const std::vector<std::string>& def) const {
  const auto v = get(key);
  return v ? split_list(*v) : def;
}

Boundary RunConfig::bc(Boundary def) const {
  const auto v = get("bc");
  if (!v) return def;
  try {
    return parse_boundary(*v);
  } catch (const Error& e) {
    invalid("bc", e.what());
  }
}

SpaceParams RunConfig::space(const SpaceParams& def) const {
  SpaceParams sp = def;
  sp.p = num("p", def.p);
  sp.k = integer("k", def.k);
  sp.gamma = num("gamma", def.gamma);
  sp.d = integer("d", def.d);
  return sp;
}

QuadratureSpec RunConfig::quad_unchecked() const {
  QuadratureSpec q;
  q.jacobi_exponent = num("quad.jacobi_exponent", q.jacobi_exponent);
  q.n_boundary = integer("quad.n_boundary", q.n_boundary);
  q.n_bulk = integer("quad.n_bulk", q.n_bulk);
  q.r_max = num("quad.r_max", q.r_max);
  q.tail_tol = num("quad.tail_tol", q.tail_tol);
  q.grading_levels = integer("quad.grading_levels", q.grading_levels);
  q.n_tangential = integer("quad.n_tangential", q.n_tangential);
  return q;
}

QuadratureSpec RunConfig::quad() const {
  const QuadratureSpec q = quad_unchecked();
  try {
    q.validate();
  } catch (const Error& e) {
    invalid("quad", e.what());
  }
  return q;
}

std::uint64_t RunConfig::seed() const {
  const int s = integer("seed", 0);
  if (s < 0) invalid("seed", "must be non-negative");
  return static_cast<std::uint64_t>(s);
}

std::vector<double> RunConfig::grid(const std::string& key, const std::vector<double>& def) const {
  const auto v = get(key);
  if (!v) return def;
  const auto items = split_list(*v);
  if (items.size() == 1 && items[0].rfind("log(", 0) == 0) {
    const auto [name, a] = call_syntax(key, items[0]);
    if (a.size() != 3 || !(a[0] > 0) || !(a[1] > a[0]) || a[2] < 2 || a[2] != std::floor(a[2]))
      invalid(key, "expected log(lo,hi,n) with 0 < lo < hi, n >= 2");
    return log_grid(a[0], a[1], static_cast<int>(a[2]));
  }
  std::vector<double> out;
  for (const auto& s : items) out.push_back(to_double(key, s));
  if (out.empty()) invalid(key, "empty grid");
  return out;
}

std::vector<NamedField> RunConfig::battery(const std::vector<std::string>& def, int d) const {
  std::vector<NamedField> out;
  for (const auto& s : list("battery", def)) out.push_back({s, parse_field(s, d)});
  if (const std::uint64_t s = seed(); s != 0) {
    std::mt19937_64 rng(s);
    std::shuffle(out.begin(), out.end(), rng);
  }
  return out;
}

std::string RunConfig::stem() const {
  if (origin_.empty() || origin_ == "<string>") return experiment_name(experiment());
  return std::filesystem::path(origin_).stem().string();
}

std::string RunConfig::output_path() const {
  if (const auto o = get("output")) return *o;
  const char* env = std::getenv("LAB_OUT_DIR");
  const std::filesystem::path root = env && *env ? env : ".";
  return (root / (stem() + ".csv")).string();
}

}  // namespace hsl
