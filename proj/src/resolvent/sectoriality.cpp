#include "resolvent/sectoriality.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "resolvent/resolvent.hpp"

namespace hsl {

namespace {

std::vector<SectorialityEntry> scan(Boundary bc, const SpaceParams& sp, const std::vector<Field>& battery,
                                    const std::vector<double>& rays, const std::vector<double>& moduli, double shift,
                                    const QuadratureSpec& q) {
  std::vector<double> fn;
  for (const auto& f : battery) fn.push_back(semigroup_space_norm(bc, f, sp, q));
  std::vector<SectorialityEntry> out;
  for (double a : rays)
    for (double r : moduli) {
      SectorialityEntry e{a, r, std::polar(r, a), 0.0};
      for (std::size_t i = 0; i < battery.size(); ++i) {
        const Field u = resolvent_laplace(bc, shift - e.lambda, battery[i]);
        e.value = std::max(e.value, r * semigroup_space_norm(bc, u, sp, q) / fn[i]);
      }
      out.push_back(e);
    }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.arg != y.arg ? x.arg < y.arg : x.modulus < y.modulus;
  });
  return out;
}

}  // namespace

SectorialityReport sectoriality_scan(Boundary bc, const SpaceParams& sp, const std::vector<Field>& battery,
                                     const SectorialityOptions& opt, const QuadratureSpec& q) {
  sp.validate();
  if (battery.empty()) fail(ErrorCode::InvalidArgument, "empty battery");
  if (opt.rays.size() < 3) fail(ErrorCode::InvalidArgument, "need at least three rays");
  for (double a : opt.rays)
    if (!(a > 0 && a <= M_PI)) fail(ErrorCode::InvalidArgument, "ray angle must lie in (0, pi]");
  const std::vector<double> moduli = opt.moduli.empty() ? log_grid(1e-2, 1e2, 13) : opt.moduli;
  if (*std::min_element(moduli.begin(), moduli.end()) > 1e-2 || *std::max_element(moduli.begin(), moduli.end()) < 1e2)
    fail(ErrorCode::InvalidArgument, "the grid must span |lambda| in [1e-2, 1e2]");

  SectorialityReport rep;
  rep.expected_small_lambda_exponent = -(1.0 + growth_exponent(bc, sp));
  const bool bounded = growth_exponent(bc, sp) == 0.0;
  rep.lambda_shift = std::isnan(opt.lambda_shift) ? (bounded ? 0.0 : 1.0) : opt.lambda_shift;
  rep.entries = scan(bc, sp, battery, opt.rays, moduli, rep.lambda_shift, q);
  if (opt.attempt_zero && rep.lambda_shift != 0.0) {
    scan(bc, sp, battery, opt.rays, moduli, 0.0, q);
    rep.lambda_zero_attempted = true;
  }
  rep.sup = 0.0;
  rep.inf = kInf;
  rep.angle_bound = M_PI;
  const double rmax = *std::max_element(moduli.begin(), moduli.end());
  for (const auto& e : rep.entries) {
    if (!std::isfinite(e.value)) continue;
    rep.sup = std::max(rep.sup, e.value);
    rep.inf = std::min(rep.inf, e.value);
    rep.angle_bound = std::min(rep.angle_bound, e.arg);
    if (e.modulus == rmax) rep.value_at_largest = std::max(rep.value_at_largest, e.value);
  }
  rep.variation = rep.sup / rep.inf;

  if (opt.fit_small_lambda) {
    // ‖R(λ,A) f_0‖ along arg λ = π with the unshifted operator
    rep.small_lambda_modulus = log_grid(opt.small_lo, opt.small_hi, opt.small_points);
    for (double r : rep.small_lambda_modulus)
      rep.small_lambda_norm.push_back(semigroup_space_norm(bc, resolvent_laplace(bc, r, battery.front()), sp, q));
    rep.small_lambda_fit = fit_loglog(rep.small_lambda_modulus, rep.small_lambda_norm);
    rep.small_lambda_fitted = true;
  }
  return rep;
}

}  // namespace hsl
