#pragma once
#include <limits>
#include <string>
#include <vector>

#include "core/field.hpp"
#include "core/norms.hpp"
#include "kernels/growth.hpp"

namespace hsl {

struct SectorialityEntry {
  double arg = 0, modulus = 0;
  cplx lambda;
  double value = 0;  // sup over the battery of |λ|‖R(λ,A)f‖/‖f‖
};

struct SectorialityReport {
  std::vector<SectorialityEntry> entries;  // sorted by (arg, modulus)
  double sup = 0, inf = 0, variation = 0;   // variation = sup/inf
  double value_at_largest = 0;              // max over rays at the largest |λ|
  double angle_bound = 0;                   // smallest |arg λ| scanned with finite entries
  double lambda_shift = 0;
  bool lambda_zero_attempted = false;
  bool small_lambda_fitted = false;
  ExponentFit small_lambda_fit;             // ‖R(λ)f_0‖ against |λ| on arg λ = π
  std::vector<double> small_lambda_modulus, small_lambda_norm;
  double expected_small_lambda_exponent = 0;  // -(1 + growth exponent)
};

struct SectorialityOptions {
  std::vector<double> rays{3 * M_PI / 4, 7 * M_PI / 8, M_PI};
  std::vector<double> moduli;  // empty: 13 log-spaced values on [1e-2, 1e2]
  double lambda_shift = std::numeric_limits<double>::quiet_NaN();  // NaN: 0 in the bounded regime, else 1
  bool attempt_zero = false;   // also scan λ_shift = 0 outside the bounded regime (recorded only)
  bool fit_small_lambda = false;
  double small_lo = 1e-4, small_hi = 1e-2;
  int small_points = 9;
};

// A = λ_shift - Δ on the semigroup space of (bc, sp); R(λ,A) = -(λ_shift - λ - Δ)^{-1}
SectorialityReport sectoriality_scan(Boundary bc, const SpaceParams& sp, const std::vector<Field>& battery,
                                     const SectorialityOptions& opt = {}, const QuadratureSpec& q = {});

}  // namespace hsl
