#pragma once
#include <functional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"
#include "core/quadrature.hpp"
#include "kernels/growth.hpp"
#include "kernels/heat.hpp"

namespace hsl {

// ---------------------------------------------------------------- elliptic

enum class EllipticMethod { images, transform };
EllipticMethod parse_elliptic_method(const std::string& s);

struct EllipticOptions {
  EllipticMethod method = EllipticMethod::images;
  int nodes = 16;  // Gauss-Legendre nodes per panel of the image-kernel integral
};

// u with λu - Δu = f and the boundary condition. images: Green's function by reflection
// (d = 1) or the Laplace-transform resolvent (d ≥ 2); transform: sine/cosine multiplier 1/(λ+ξ²), d = 1.
Field elliptic_solve(Boundary bc, cplx lambda, const Field& f, const EllipticOptions& opt = {});

// Σ_{|β|≤2} |λ|^{1-|β|/2} ‖∂^β u‖
double weighted_derivative_sum(const Field& u, cplx lambda, const std::function<double(const Field&)>& norm);

struct EllipticEntry {
  cplx lambda;
  std::size_t field = 0;
  double ratio = 0, g = 0, ratio_over_g = 0;
};

struct EllipticRegularityReport {
  std::vector<EllipticEntry> entries;
  double C = 0;                      // max ratio/g
  double ratio_over_g_slope = 0;     // d log(ratio/g) / d log|λ| on the smallest decade (envelope)
  double fitted_exponent = 0;        // -d log(envelope) / d log|λ| on the smallest decade
  double h_exponent = 0;             // (γ+kp-2p+1+ε)/(2p), 0 below the threshold
  bool h_applies = false;            // γ+kp > 2p-1
  double rotation_spread = 0;        // max over |λ| of max/min ratio across arg λ
};

// ratio := Σ|λ|^{1-|β|/2}‖∂^β u‖_X / ‖f‖_X, X the semigroup space of (bc, sp)
EllipticRegularityReport elliptic_regularity_check(Boundary bc, const SpaceParams& sp,
                                                   const std::vector<cplx>& lambda_grid,
                                                   const std::vector<Field>& battery, double eps = 0.1,
                                                   const QuadratureSpec& q = {});

struct ScalingEntry {
  double r = 1;
  double residual = 0;  // ‖r²λu_r - Δu_r - r²f_r‖ / ‖r²f_r‖ in L^p(w_γ)
  double ratio = 0;     // homogeneous-norm regularity ratio
};

struct ScalingReport {
  std::vector<ScalingEntry> entries;
  double max_residual = 0, ratio_spread = 0;  // spread = max/min ratio
};

// u_r(x) = u(rx) solves r²λ u_r - Δu_r = r² f_r; d = 1
ScalingReport homogeneous_scaling_check(Boundary bc, const SpaceParams& sp, const std::vector<double>& r_set,
                                        cplx lambda, const Field& f, const QuadratureSpec& q = {});

// ---------------------------------------------------------------- parabolic

struct TimeWeight {
  double eta = 0, q = 2;
  void validate() const;  // InvalidArgument unless η ∈ (-1, q-1)
};

// f(t,x) = Σ a_i(t) φ_i(x)
struct TimeTerm {
  std::function<cplx(double)> a;
  Field phi;
};

struct TimeField {
  std::vector<TimeTerm> terms;
  Field at(double t) const;
  static TimeField exponential(double rate, const Field& phi, cplx coef = 1.0);  // coef e^{-rate t} φ
};

struct DuhamelOptions {
  int panels = 2;         // uniform panels in s on [0,t]
  int nodes = 12;         // Gauss-Legendre nodes per panel
  int grading = 3;        // extra geometric panels toward s = t
  double tol = 1e-8;      // relative change under halving
  int max_halvings = 4;
  QuadratureSpec quad;
};

struct DuhamelSolution {
  std::vector<double> t;
  std::vector<Field> u;     // u(t_i)
  std::vector<Field> lap;   // Δu(t_i)
  std::vector<Field> dt;    // ∂_t u(t_i) = f(t_i) + Δu(t_i)
  std::vector<int> halvings;
};

// u(t) = ∫_0^t T(t-s) f(s) ds, u(0) = 0; TimeStepNotConverged if halving keeps changing u
DuhamelSolution duhamel_solve(Boundary bc, const TimeField& f, const std::vector<double>& t_grid,
                              const DuhamelOptions& opt = {});

// max over x_samples of |u(t) - ∫_0^t Δu - ∫_0^t f| / max|u(t)|, the τ-integrals by Gauss-Legendre
double duhamel_integrated_residual(Boundary bc, const TimeField& f, double t, const Field& u_t,
                                   const std::vector<double>& x_samples, const DuhamelOptions& opt = {},
                                   int tau_panels = 3, int tau_nodes = 12);

struct MaxRegOptions {
  int time_levels = 4;   // geometric panels toward t = 0
  int time_nodes = 6;    // nodes per time panel
  DuhamelOptions duhamel;
};

struct MaxRegEntry {
  std::size_t field = 0;
  double ratio_coarse = 0, ratio_fine = 0;
  double change = 0;  // max(ratio_fine/ratio_coarse, ratio_coarse/ratio_fine)
};

struct MaxRegReport {
  std::vector<MaxRegEntry> entries;
  double C = 0;             // max ratio
  double max_change = 0;
  bool vacuous = false;     // every datum zero
};

// (‖∂_t u‖ + ‖Δu‖) / ‖f‖ in L^q((0,T), t^η; X); the fine run doubles the time nodes, the Duhamel
// panels and the spatial bulk nodes
MaxRegReport maximal_regularity_check(Boundary bc, const SpaceParams& sp, const TimeWeight& tw, double T,
                                      const std::vector<TimeField>& battery, const MaxRegOptions& opt = {});

// ---------------------------------------------------------------- weak setting

// f = f_0 + Σ_j ∂_j f_j; components.size() = d + 1, zero fields allowed
struct WeakDatum {
  std::vector<Field> components;
  int dim() const;
};

// ∫_{R^d_+} u φ dx (bilinear)
cplx pairing(const Field& u, const Field& phi, const QuadratureSpec& q = {});

struct WeakPairing {
  cplx value = 0;
  std::vector<cplx> parts;  // signed contribution of each component
};

// (T_Dir(z)f)(φ) = ⟨T_Dir f_0, φ⟩ - ⟨T_Neu f_1, ∂_1φ⟩ - Σ_{j≥2} ⟨T_Dir f_j, ∂_jφ⟩
WeakPairing weak_setting_apply(const SectorTime& z, const WeakDatum& wd, const Field& phi,
                               const QuadratureSpec& q = {});

// Σ_j ‖f_j‖_{L^p(w_γ)}: an upper bound for the W^{-1,p} norm of this representation
double weak_representation_norm(const WeakDatum& wd, double p, double gamma, const QuadratureSpec& q = {});

}  // namespace hsl
