#pragma once
#include <functional>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"

namespace hsl {

enum class TransformMode { sine, cosine };
TransformMode mode_for(Boundary bc);  // odd extension ↔ sine

using Multiplier = std::function<cplx(double s)>;  // symbol of the spectral variable s = λ + ξ²

struct OracleOptions {
  double tol = 1e-12;       // tail mass of ξ^orders·|φ F| above the cut, relative
  double x_max = 0.0;       // output resolved on [0, x_max]; 0: from the input
  double symbol_cap = 1e8;  // UnboundedSymbol above this
  int orders = 2;           // derivative orders the cut must cover
  int nodes = 16;           // Gauss-Legendre nodes per ξ panel
};

// F_s f(ξ) = ∫ f sin(ξx) dx or F_c f(ξ) = ∫ f cos(ξx) dx (d = 1)
std::vector<cplx> oracle_transform(const Field& f, TransformMode mode, const std::vector<double>& xi);

// ξ-quadrature for one axial profile: g = φ(λ+ξ²)·F(ξ) on the nodes
struct TransformGrid {
  TransformMode mode = TransformMode::sine;
  std::vector<double> xi, w;
  std::vector<cplx> g;
  double xi_cut = 0, x_max = 0, tail = 0;
};

TransformGrid make_transform_grid(const AxialPtr& f, TransformMode mode, const Multiplier& phi,
                                  double shift, const OracleOptions& opt = {});

// x ↦ (2/π) ∫ g(ξ) sin(ξx) dξ (or cos)
class SpectralAxial final : public Axial {
 public:
  explicit SpectralAxial(TransformGrid grid) : grid_(std::move(grid)) {}
  cplx eval(double x, int m) const override;
  double extent() const override { return grid_.x_max; }
  double scale() const override;
  const TransformGrid& grid() const { return grid_; }

 private:
  TransformGrid grid_;
};

// φ(λ_shift - Δ) f through the transform matching bc
Field oracle_function_calculus(Boundary bc, const Multiplier& phi, double lambda_shift, const Field& f,
                               const OracleOptions& opt = {});

// Parseval sum (2/π)∫|F|² over the grid built with φ ≡ 1
double oracle_parseval(const Field& f, TransformMode mode, const OracleOptions& opt = {});

// (λ - Δ)^{-1} f by the method-of-images Green's function; BranchCut on (-∞,0]
class GreenAxial final : public Axial {
 public:
  GreenAxial(AxialPtr f, cplx lambda, Boundary bc, int n_nodes = 16);
  cplx eval(double x, int m) const override;
  int max_order() const override { return f_->max_order() + 2; }
  std::vector<double> breakpoints() const override { return f_->breakpoints(); }
  double extent() const override { return extent_; }
  double scale() const override { return scale_; }
  double fine_extent() const override { return f_->fine_extent(); }
  double coarse_scale() const override {
    const double far = 1.0 / std::abs(mu_);
    return f_->fine_extent() < f_->extent() ? std::min(f_->coarse_scale(), far) : far;
  }
  double cost() const override { return 64.0 * f_->cost(); }

 private:
  AxialPtr f_;
  cplx lambda_, mu_;
  Boundary bc_;
  int n_;
  double extent_, scale_, reach_;
};

Field oracle_resolvent(Boundary bc, cplx lambda, const Field& f);

}  // namespace hsl
