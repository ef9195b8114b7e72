#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"
#include "core/quadrature.hpp"

namespace hsl {

enum class Experiment {
  norms, hardy, semigroup, growth, blowup, sector, hinf, commutators, elliptic, scaling, maxreg, weak
};

const char* experiment_name(Experiment e);
Experiment parse_experiment(const std::string& s);  // ConfigInvalid

// One named entry of a field battery, e.g. "xgauss(1,0.25)".
struct NamedField {
  std::string name;
  Field field;
};

// `key = value` lines; '#' starts a comment; dotted keys for nesting (quad.r_max).
// Every key is checked against the known set on load: ConfigInvalid names the key.
class RunConfig {
 public:
  static RunConfig parse(const std::string& text, const std::string& origin = "<string>");
  static RunConfig load(const std::string& path);

  // override or add one entry (same validation as parsing)
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return raw_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return raw_; }
  const std::string& origin() const { return origin_; }

  Experiment experiment() const;
  std::vector<int> criteria() const;  // `criterion = 4` or `4;9`; empty if absent

  double num(const std::string& key, double def) const;
  int integer(const std::string& key, int def) const;
  std::string str(const std::string& key, const std::string& def) const;
  std::vector<std::string> list(const std::string& key, const std::vector<std::string>& def) const;

  Boundary bc(Boundary def = Boundary::dirichlet) const;
  SpaceParams space(const SpaceParams& def) const;
  QuadratureSpec quad() const;
  std::uint64_t seed() const;
  // `log(lo,hi,n)` or an explicit `a; b; c` list
  std::vector<double> grid(const std::string& key, const std::vector<double>& def) const;
  // battery after the optional seeded shuffle
  std::vector<NamedField> battery(const std::vector<std::string>& def, int d = 1) const;
  // resolved output path: `output`, else $LAB_OUT_DIR/<stem>.csv, else ./<stem>.csv
  std::string output_path() const;
  std::string stem() const;

 private:
  void check_and_store(const std::string& key, const std::string& value);
  QuadratureSpec quad_unchecked() const;
  std::map<std::string, std::string> raw_;
  std::string origin_ = "<string>";
};

// "xgauss(1,0.25)" → x e^{-0.25x²}; names: zero, exp(b), xexp(a,b), xgauss(a,q), zeta, bump(c,w)
Field parse_field(const std::string& spec, int d = 1);

// the keys a config may contain
const std::vector<std::string>& known_config_keys();

}  // namespace hsl
