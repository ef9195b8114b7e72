#pragma once
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"

namespace hsl {

struct CommutatorResidual {
  std::string identity;
  double residual = 0, norm_u = 0;
  double relative() const { return residual / norm_u; }
};

// Residual norms in L^p(w_γ) of the resolvent commutator identities at z:
//   Dirichlet suite (u axially compactly supported in (0,∞)):
//     [∂_2, R]u (d = 2), [∂_1², R]u, [M, R]u + 2R∂_1Ru, [M∂_1, R]u + 2R∂_1²Ru (d = 1)
//   Neumann suite (∂_1 u compactly supported): ∂_1 R_N u - R_D ∂_1 u, [∂_1², R_N]u, [∂_2, R_N]u (d = 2)
// with R = (z - Δ)^{-1} computed by resolvent_laplace and M = multiplication by x_1.
std::vector<CommutatorResidual> commutator_suite(Boundary suite, cplx z, const Field& u, double p = 2.0,
                                                 double gamma = 0.0, const QuadratureSpec& q = {});

}  // namespace hsl
