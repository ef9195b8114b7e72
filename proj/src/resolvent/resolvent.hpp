#pragma once
#include <memory>
#include <mutex>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"
#include "core/quadrature.hpp"

namespace hsl {

// A family of image-kernel profiles k_n(s), s ≥ 0, with
//   u^{(2n+r)}(x) = ∫ [sgn(x-y)^r k_n^{(r)}(|x-y|) ± k_n^{(r)}(x+y)] f(y) dy - Σ_{i<n} S_i f^{(2(n-1-i)+r)}(x)
// (- for Dirichlet, + for Neumann). Profiles are tabulated on first use.
class KernelFamily {
 public:
  virtual ~KernelFamily() = default;
  virtual cplx raw(double s, int n, int r) const = 0;  // direct evaluation
  virtual cplx S(int i) const = 0;
  virtual double reach() const = 0;       // profiles negligible beyond
  virtual double near_scale() const = 0;  // finest feature, at s → 0
  virtual double far_scale() const = 0;   // panel width away from s = 0
  virtual int max_n() const { return 2; }

  // tabulated k_n^{(r)}, r ∈ {0,1}
  cplx profile(double s, int n, int r) const;
  // skip tabulation; for fields evaluated at a handful of points
  void set_direct(bool d) { direct_ = d; }

 private:
  bool direct_ = false;
  mutable std::once_flag once_[3];
  mutable std::shared_ptr<const Axial> tables_[3];
};

using FamilyPtr = std::shared_ptr<const KernelFamily>;

// u = ∫ K(x,y) f(y) dy for an image kernel family
class ImageKernelAxial final : public Axial {
 public:
  ImageKernelAxial(AxialPtr f, FamilyPtr fam, Boundary bc, int n_nodes = 16);
  cplx eval(double x, int m) const override;
  int max_order() const override;
  std::vector<double> breakpoints() const override { return f_->breakpoints(); }
  double extent() const override { return extent_; }
  double scale() const override { return scale_; }
  double fine_extent() const override { return f_->fine_extent(); }
  double coarse_scale() const override {
    return f_->fine_extent() < f_->extent() ? std::min(f_->coarse_scale(), fam_->far_scale()) : fam_->far_scale();
  }
  double cost() const override { return 64.0 * f_->cost(); }

 private:
  AxialPtr f_;
  FamilyPtr fam_;
  Boundary bc_;
  int n_;
  double extent_, scale_;
};

struct LaplaceOptions {
  double panel = 0.0;       // width of the Gauss-Legendre panels in v = log τ (0: from arg μ)
  int nodes = 16;
  double decay = 40.0;      // τ_max = decay / Re(μ e^{iδ})
  double check_tol = 1e-10; // ContourNotConverged above this (relative to max |k|)
  bool check = true;
};

// (μ - Δ)^{-1} kernel profile from the rotated Laplace transform of the heat kernel:
// k(s) = e^{iδ} ∫_0^∞ e^{-μτe^{iδ}} G_{τe^{iδ}}(s) dτ, δ = -arg(μ)/2
class LaplaceFamily final : public KernelFamily {
 public:
  LaplaceFamily(cplx mu, const LaplaceOptions& opt = {});
  cplx raw(double s, int n, int r) const override;
  cplx S(int i) const override { return std::pow(mu_, i); }
  double reach() const override { return reach_; }
  double near_scale() const override { return 1.0 / std::sqrt(std::abs(mu_)); }
  double far_scale() const override { return 2.0 / std::sqrt(std::abs(mu_)); }
  cplx mu() const { return mu_; }

 private:
  struct Node {
    double tau;
    cplx a, b, c;  // exponent a + s² b, weight c
  };
  std::vector<Node> build(double panel, double tmax) const;
  cplx sum(const std::vector<Node>& nodes, double s, int r) const;
  cplx mu_;
  double delta_, reach_;
  LaplaceOptions opt_;
  std::vector<Node> nodes_;
};

// (λ - Δ)^{-1} f through the Laplace representation of the semigroup. d = 1 directly;
// d ≥ 2 by a plane-wave expansion of the tangential factors (1D resolvent at λ + |η|²).
Field resolvent_laplace(Boundary bc, cplx lambda, const Field& f, const LaplaceOptions& opt = {});

// ‖λu - ∂²u - f‖ in L^p(w_γ), ∂² by Richardson-extrapolated central differences (d = 1)
double resolvent_residual(cplx lambda, const Field& u, const Field& f, double p, double gamma,
                          const QuadratureSpec& q = {});

// plane-wave expansion of a tangential factor: Σ_k c_k e^{iη_k x} trusted on |x| ≤ L
Tangential1D plane_wave_expansion(const Tangential1D& g, double L);

}  // namespace hsl
