#pragma once
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/quadrature.hpp"

namespace hsl {

enum class Boundary { dirichlet, neumann };
enum class Parity { odd, even };

const char* boundary_name(Boundary b);
Boundary parse_boundary(const std::string& s);

struct SpaceParams {
  double p = 2.0;
  int k = 0;
  double gamma = 0.0;
  int d = 1;
  // rejects p <= 1, k < -1, d outside {1,2,3} and, for Sobolev constructions,
  // exact hits of the excluded set {jp-1 : j >= 1}
  void validate(bool sobolev = true) const;
  double main_weight() const { return gamma + k * p; }
};

struct PowerWeight {
  double gamma;
  double operator()(double x1) const;
  bool locally_integrable() const { return gamma > -1.0; }
};

// (∫ |∂^alpha f|^p x1^gamma dx); no guard on gamma (used where f vanishes at 0)
double weighted_lp_power(const Field& f, const MultiIndex& alpha, double p, double gamma,
                         const QuadratureSpec& q);

double weighted_lp_norm(const Field& f, double p, double gamma, const QuadratureSpec& q);
double weighted_sobolev_norm(const Field& f, const SpaceParams& sp, const QuadratureSpec& q);
double homogeneous_sobolev_norm(const Field& f, const SpaceParams& sp, const QuadratureSpec& q);

struct HardyResult {
  double lhs = 0, rhs = 0, ratio = 0;
};
HardyResult hardy_check(const Field& u, double p, double gamma, const QuadratureSpec& q,
                        double trace_tol = 1e-8, bool allow_critical = false);

Field multiply_power(const Field& f, double theta);

class Extension {
 public:
  Extension(Field f, Parity parity) : f_(std::move(f)), parity_(parity) {}
  cplx eval(double y1, const std::vector<double>& yt = {}, const MultiIndex& alpha = {0, 0, 0}) const;
  // (∫_{R^d} |E f|^p |y1|^gamma dy)^{1/p}, both half-spaces integrated separately
  double lp_norm(double p, double gamma, const QuadratureSpec& q) const;
  Parity parity() const { return parity_; }

 private:
  Field f_;
  Parity parity_;
};

Extension extend(const Field& f, Parity parity);

struct TraceValue {
  int order = 0;
  std::vector<std::vector<double>> points;  // tangential sample points
  std::vector<cplx> values;
  double residual = 0.0;
  cplx value() const { return values.empty() ? cplx(0.0) : values.front(); }
};

TraceValue trace(const Field& f, int order, double tol = 1e-8, double h = 1e-4);

}  // namespace hsl
