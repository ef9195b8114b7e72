#pragma once
#include <functional>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"
#include "resolvent/resolvent.hpp"

namespace hsl {

// behaviour at ∞ inside the sector
enum class SymbolDecay {
  exponential,  // |φ| ≤ C e^{-c|z|}
  algebraic,    // |φ| ≤ C/|z|
  bounded,      // φ → at_infinity, φ - at_infinity algebraic
};

struct HolomorphicSymbol {
  std::string name;
  std::function<cplx(cplx)> phi;
  double omega = M_PI / 8;  // holomorphic and bounded on Σ_omega
  SymbolDecay decay = SymbolDecay::algebraic;
  cplx at_infinity = 0.0;

  cplx operator()(cplx z) const { return phi(z); }
  HolomorphicSymbol scaled(cplx c) const;
};

HolomorphicSymbol symbol_rational(double a);  // az/(1+az)²
HolomorphicSymbol symbol_z_exp();             // z e^{-z}
HolomorphicSymbol symbol_exp_difference();    // e^{-z} - e^{-2z}
HolomorphicSymbol symbol_constant(cplx c);

// sup |φ| over a dense sample of Σ_omega (rays, interior angles, log-spaced radii)
double hinf_norm_estimate(const HolomorphicSymbol& phi, double omega);

// Γ_ν = ∂(Σ_ν \ B(0,δ)), run downwards: ∞e^{iν} → δe^{iν}, arc through δ, δe^{-iν} → ∞e^{-iν}
struct ContourSpec {
  double nu = M_PI / 10;
  double arc_radius = 0.0;  // 0: λ_shift/2
  double r_max = 0.0;       // 0: from the decay class
  int n_ray = 0;            // Gauss-Legendre nodes per ray in u = log r (0: from ν)
  int n_arc = 32;
  bool check = true;        // ContourNotConverged by node doubling
  double check_tol = 1e-7;
  void validate() const;
};

struct ContourNode {
  cplx z, dz;  // dz includes orientation and quadrature weight
};

std::vector<ContourNode> contour_nodes(const ContourSpec& c, double r_max, double delta);

// Σ_j c_j (μ_j - Δ)^{-1}, μ_j = λ_shift - z_j, as an image-kernel family
class ContourFamily final : public KernelFamily {
 public:
  ContourFamily(std::vector<cplx> coef, std::vector<cplx> mu);
  cplx raw(double s, int n, int r) const override;
  cplx S(int i) const override { return S_[i]; }
  double reach() const override { return reach_; }
  double near_scale() const override { return near_; }
  double far_scale() const override { return far_; }

 private:
  std::vector<cplx> c_, mu_, sq_;
  cplx S_[3];
  double reach_, near_, far_;
};

// φ(A) f, A = λ_shift - Δ (d = 1), by the Cauchy integral over Γ_ν with the tail beyond
// r_max replaced by the expansion R(z,A)f ≈ Σ_n A^n f / z^{n+1}
Field hinf_apply(Boundary bc, const HolomorphicSymbol& phi, const ContourSpec& contour, double lambda_shift,
                 const Field& f);

struct HinfProbeEntry {
  std::string symbol;
  std::size_t field = 0;
  double hinf_norm = 0, ratio = 0;
};

struct HinfProbeResult {
  std::vector<HinfProbeEntry> entries;
  double max_ratio = 0;
};

// ‖φ(A)f‖/(‖φ‖_∞‖f‖) in the semigroup space of (bc, sp)
HinfProbeResult hinf_bound_probe(Boundary bc, const SpaceParams& sp, const std::vector<HolomorphicSymbol>& symbols,
                                 const std::vector<Field>& battery, double lambda_shift,
                                 const ContourSpec& contour = {}, const QuadratureSpec& q = {});

}  // namespace hsl
