#pragma once
#include <vector>

#include "core/axial.hpp"
#include "core/norms.hpp"

namespace hsl {

// complex time z inside the sector |arg z| < sigma < π/2
struct SectorTime {
  cplx z = 1.0;
  double sigma = 1.0;

  SectorTime() = default;
  SectorTime(cplx z_, double sigma_) : z(z_), sigma(sigma_) {}
  static SectorTime real(double t) { return {cplx(t, 0.0), 1.0}; }
  static SectorTime polar(double r, double delta, double sigma) {
    return {std::polar(r, delta), sigma};
  }
  double delta() const { return std::arg(z); }
  void validate() const;  // SectorViolation
};

// ∂_u^m G^1_z(u)
cplx gauss_derivative(cplx z, double u, int m);

// G^d_z(x), d = x.size()
cplx heat_kernel_free(const SectorTime& z, const std::vector<double>& x);

// H^{1,-} (Dirichlet) or H^{1,+} (Neumann)
cplx heat_kernel_halfspace(const SectorTime& z, double x1, double y1, Boundary bc);
// H^{1,∓}_z(x1,y1) G^{d-1}_z(x̃-ỹ)
cplx heat_kernel_halfspace(const SectorTime& z, const std::vector<double>& x,
                           const std::vector<double>& y, Boundary bc);

}  // namespace hsl
