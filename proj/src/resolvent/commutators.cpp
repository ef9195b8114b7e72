#include "resolvent/commutators.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "resolvent/resolvent.hpp"

namespace hsl {

std::vector<CommutatorResidual> commutator_suite(Boundary suite, cplx z, const Field& u, double p, double gamma,
                                                 const QuadratureSpec& q) {
  const int d = u.dim();
  if (d > 2) fail(ErrorCode::InvalidArgument, "commutator suite is for d <= 2");
  if (u.is_zero()) fail(ErrorCode::InvalidArgument, "zero field");
  for (const auto& t : u.terms())
    if (!std::isfinite(t.axial->extent())) fail(ErrorCode::HypothesisViolated, "axial factor must have compact support");
  if (suite == Boundary::dirichlet) {
    for (const auto& t : u.terms())
      if (!(t.axial->support_lo() > 0)) fail(ErrorCode::HypothesisViolated, "support must avoid the boundary");
  } else {
    for (const auto& t : u.terms())
      if (std::abs(t.axial->eval(0.0, 1)) > 1e-12) fail(ErrorCode::HypothesisViolated, "d1 u must vanish near the boundary");
  }

  const MultiIndex d1{1, 0, 0}, d11{2, 0, 0}, d2{0, 1, 0};
  auto R = [&](Boundary bc, const Field& f) { return resolvent_laplace(bc, z, f); };
  auto M = [](const Field& f) { return multiply_power(f, 1.0); };
  const double nu = weighted_lp_norm(u, p, gamma, q);
  std::vector<CommutatorResidual> out;
  auto add = [&](const std::string& name, const Field& r) {
    out.push_back({name, r.is_zero() ? 0.0 : weighted_lp_norm(r, p, gamma, q), nu});
  };

  const Boundary D = Boundary::dirichlet, N = Boundary::neumann;
  if (suite == D) {
    const Field Ru = R(D, u);
    if (d == 2) add("[d2,R_D]u", Ru.derivative(d2) - R(D, u.derivative(d2)));
    add("[d1^2,R_D]u", Ru.derivative(d11) - R(D, u.derivative(d11)));
    if (d == 1) {
      add("[M,R_D]u+2R_D d1 R_D u", M(Ru) - R(D, M(u)) + R(D, Ru.derivative(d1)).scaled(2.0));
      add("[M d1,R_D]u+2R_D d1^2 R_D u",
          M(Ru.derivative(d1)) - R(D, M(u.derivative(d1))) + R(D, Ru.derivative(d11)).scaled(2.0));
    }
  } else {
    const Field Ru = R(N, u);
    add("d1 R_N u-R_D d1 u", Ru.derivative(d1) - R(D, u.derivative(d1)));
    add("[d1^2,R_N]u", Ru.derivative(d11) - R(N, u.derivative(d11)));
    if (d == 2) add("[d2,R_N]u", Ru.derivative(d2) - R(N, u.derivative(d2)));
  }
  return out;
}

}  // namespace hsl
