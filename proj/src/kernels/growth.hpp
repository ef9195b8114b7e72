#pragma once
#include <functional>
#include <vector>

#include "core/norms.hpp"
#include "core/quadrature.hpp"
#include "kernels/heat.hpp"

namespace hsl {

struct ExponentFit {
  double slope = 0, intercept = 0, r_squared = 0;
  double t_lo = 0, t_hi = 0;
};

// least squares of log y against log t; ≥ 8 points over ≥ 2 decades
ExponentFit fit_loglog(const std::vector<double>& t, const std::vector<double>& y,
                       double min_r2 = 0.98);

// g_{k,γ} and h_{k,γ,ε}
struct RateFunction {
  enum Kind { g, h } kind = g;
  double p = 2;
  int k = 0;
  double gamma = 0, eps = 0;
  double operator()(cplx lambda) const;
  double exponent() const;  // blow-up power of |λ|^{-1} as λ → 0 (0 when bounded)
};

// predicted growth exponent of ‖T(t)‖ (0 in the bounded regime)
double growth_exponent(Boundary bc, const SpaceParams& sp);
// norm used for T(t) on the declared (p,k,γ): W^{k,p}(w_{γ+kp}) or W^{k+1,p}(w_{γ+kp})
double semigroup_space_norm(Boundary bc, const Field& f, const SpaceParams& sp, const QuadratureSpec& q);

std::vector<double> log_grid(double lo, double hi, int n);

struct GrowthResult {
  ExponentFit fit;                    // the steeper of the two below
  ExponentFit fit_witness, fit_envelope;
  bool used_envelope = false;
  std::vector<double> t;
  std::vector<double> witness;        // ‖T(t)ζ‖/‖ζ‖
  std::vector<double> envelope;       // max_r ‖T(t)ζ_r‖/‖ζ_r‖
  std::vector<double> argmax_r;
  double expected = 0;
};

// envelope samples only (no fit)
GrowthResult growth_envelope(Boundary bc, const SpaceParams& sp, const std::vector<double>& t_grid,
                             const QuadratureSpec& q = {}, int dilations = 33);
// fits log-log slopes of the fixed witness ζ and of the dilation envelope
// (ζ_r = ζ(·/r), r = 2^{j/2}, j < dilations); FitRejected if the chosen r² < 0.98
GrowthResult growth_experiment(Boundary bc, const SpaceParams& sp, const std::vector<double>& t_grid,
                               const QuadratureSpec& q = {}, int dilations = 33);

struct BlowupResult {
  std::vector<double> depth;      // S_j: refinement reaches y = e^{-S_j}
  std::vector<double> partial;    // ∫_{e^{-S_j}}^{3/4} H(x,y) f(y) dy
  std::vector<double> membership; // ∫_{e^{-S_j}} |f|^p y^γ
  double norm = 0;                // membership value at the last level, ^(1/p)
  bool norm_converged = false;
  bool diverges = false;          // partials at least double per level
  double min_growth = 0;          // min P_{j+1}/P_j
};

BlowupResult blowup_probe(Boundary bc, double p, double gamma, double t, int levels, double x_probe);

// partial values of ∫_{e^{-S_j}}^{1/2} y^{-1}|log y|^{-beta} dy
std::vector<double> log_integral_partials(double beta, double S0, double m, int levels);

struct SectorBound {
  double ratio = 0;             // against the displayed comparison kernel
  double bound = 0;             // 1/cos δ (Dirichlet) or 1 (Neumann)
  double normalized_ratio = 0;  // against H_{t/cos δ} itself
  double normalized_bound = 0;  // (cos δ)^{-3/2} or (cos δ)^{-1/2}
};

SectorBound kernel_sector_bound_check(Boundary bc, double delta, const std::vector<double>& t_grid,
                                      const std::vector<double>& xy_grid);

}  // namespace hsl
