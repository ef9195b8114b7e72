#include "kernels/heat.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace hsl {

void SectorTime::validate() const {
  if (!(sigma > 0.0 && sigma < M_PI / 2))
    fail(ErrorCode::SectorViolation, "sector angle must lie in (0, pi/2)");
  if (!(z.real() > 0.0)) fail(ErrorCode::SectorViolation, "Re z must be positive");
  if (!(std::abs(std::arg(z)) < sigma))
    fail(ErrorCode::SectorViolation, "|arg z| = " + std::to_string(std::abs(std::arg(z))) +
                                         " not below sigma = " + std::to_string(sigma));
}

cplx gauss_derivative(cplx z, double u, int m) {
  const cplx rs = std::sqrt(4.0 * z);
  const cplx v = u / rs;
  cplx h0 = 1.0, h1 = 2.0 * v;
  cplx hm = m == 0 ? h0 : h1;
  for (int k = 1; k < m; ++k) {
    const cplx h2 = 2.0 * v * h1 - 2.0 * static_cast<double>(k) * h0;
    h0 = h1;
    h1 = h2;
    hm = h2;
  }
  const cplx g = std::exp(-v * v) / std::sqrt(4.0 * M_PI * z);
  return (m % 2 == 0 ? 1.0 : -1.0) * g * hm * std::pow(rs, -m);
}

cplx heat_kernel_free(const SectorTime& z, const std::vector<double>& x) {
  z.validate();
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double d = static_cast<double>(x.size());
  return std::pow(4.0 * M_PI * z.z, -d / 2.0) * std::exp(-r2 / (4.0 * z.z));
}

cplx heat_kernel_halfspace(const SectorTime& z, double x1, double y1, Boundary bc) {
  z.validate();
  if (x1 < 0.0 || y1 < 0.0) fail(ErrorCode::InvalidArgument, "half-space kernel needs x1, y1 >= 0");
  const cplx a = gauss_derivative(z.z, x1 - y1, 0);
  const cplx b = gauss_derivative(z.z, x1 + y1, 0);
  return bc == Boundary::dirichlet ? a - b : a + b;
}

cplx heat_kernel_halfspace(const SectorTime& z, const std::vector<double>& x,
                           const std::vector<double>& y, Boundary bc) {
  if (x.empty() || x.size() != y.size())
    fail(ErrorCode::InvalidArgument, "kernel points must share a nonzero dimension");
  std::vector<double> dt;
  for (std::size_t j = 1; j < x.size(); ++j) dt.push_back(x[j] - y[j]);
  cplx t = dt.empty() ? cplx(1.0) : heat_kernel_free(z, dt);
  return heat_kernel_halfspace(z, x[0], y[0], bc) * t;
}

}  // namespace hsl
