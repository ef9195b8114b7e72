#pragma once
#include "core/field.hpp"
#include "core/norms.hpp"
#include "core/quadrature.hpp"
#include "kernels/heat.hpp"

namespace hsl {

// x1 ↦ ∫_0^∞ H^{1,∓}_z(x1,y) f(y) dy on a fixed y-grid; derivatives fall on the kernel.
class SemigroupAxial final : public Axial {
 public:
  SemigroupAxial(AxialPtr f, cplx z, Boundary bc, const QuadratureSpec& q = {});
  cplx eval(double x, int m) const override;
  void eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const override;
  double extent() const override { return extent_; }
  double scale() const override { return scale_; }
  double cost() const override;
  std::size_t nodes() const { return y_.size(); }

 private:
  template <class T>
  cplx sum_window(double x, int m) const;

  cplx z_;
  Boundary bc_;
  double window_, extent_, scale_;
  std::vector<double> y_;
  std::vector<cplx> wf_;  // weight · f(y)
  bool real_;
};

Field apply_semigroup(Boundary bc, const SectorTime& z, const Field& f, const QuadratureSpec& q = {});

// ‖(T(h)f - f)/h - Δf‖_{L^p(w_{γ+kp})}
double generator_residual(Boundary bc, const Field& f, double h, const QuadratureSpec& q = {},
                          const SpaceParams& sp = {});

}  // namespace hsl
