#include "kernels/growth.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "core/errors.hpp"
#include "kernels/semigroup.hpp"

namespace hsl {

ExponentFit fit_loglog(const std::vector<double>& t, const std::vector<double>& y, double min_r2) {
  if (t.size() != y.size()) fail(ErrorCode::InvalidArgument, "fit arrays differ in length");
  if (t.size() < 8) fail(ErrorCode::InvalidArgument, "fit needs at least 8 points");
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  if (!(*lo > 0) || *hi / *lo < 100.0 * (1 - 1e-12))
    fail(ErrorCode::InvalidArgument, "fit points must span two decades");
  const std::size_t n = t.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0) || !std::isfinite(y[i])) fail(ErrorCode::FitRejected, "non-positive sample");
    lx[i] = std::log(t[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  ExponentFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (f.intercept + f.slope * lx[i]);
    ssr += r * r;
  }
  // flat data: variance below a 1e-3 log-noise floor counts as explained
  f.r_squared = std::clamp(1.0 - ssr / std::max(syy, n * 1e-6), 0.0, 1.0);
  f.t_lo = *lo;
  f.t_hi = *hi;
  if (f.r_squared < min_r2)
    fail(ErrorCode::FitRejected, "r^2 = " + std::to_string(f.r_squared) + " below " +
                                     std::to_string(min_r2));
  return f;
}

double RateFunction::exponent() const {
  if (kind == g) {
    if (gamma > -1 && gamma < p - 1) return std::max(k - 1, 0) / 2.0;
    return k / 2.0;
  }
  const double w = gamma + k * p;
  if (w < 2 * p - 1) return 0.0;
  return (w - 2 * p + 1 + eps) / (2 * p);
}

double RateFunction::operator()(cplx lambda) const {
  const double e = exponent();
  if (kind == h && e == 0.0) return 1.0;
  return 1.0 + std::pow(std::abs(lambda), -e);
}

double growth_exponent(Boundary bc, const SpaceParams& sp) {
  const double w = sp.main_weight();
  const double e = bc == Boundary::dirichlet ? (w - 2 * sp.p + 1) / (2 * sp.p)
                                             : (w - sp.p + 1) / (2 * sp.p);
  return std::max(0.0, e);
}

double semigroup_space_norm(Boundary bc, const Field& f, const SpaceParams& sp, const QuadratureSpec& q) {
  SpaceParams s = sp;
  s.gamma = sp.main_weight();
  s.k = bc == Boundary::dirichlet ? sp.k : sp.k + 1;
  return weighted_sobolev_norm(f, s, q);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

namespace {

Field witness(int d, double r) {
  AxialPtr z = zeta_cutoff();
  if (r != 1.0) z = std::make_shared<ScaledArg>(z, 1.0 / r);
  if (d == 1) return Field::axial(z);
  return Field::separable(z, std::vector<Tangential1D>(d - 1, Tangential1D::gaussian(1.0)));
}

}  // namespace

GrowthResult growth_envelope(Boundary bc, const SpaceParams& sp, const std::vector<double>& t_grid,
                             const QuadratureSpec& q, int dilations) {
  sp.validate();
  if (sp.k < 0) fail(ErrorCode::InvalidArgument, "growth experiment needs k >= 0");
  if (bc == Boundary::dirichlet && sp.k > 2)
    fail(ErrorCode::InsufficientDerivatives, "the C^3 cutoff supports k <= 2 only");
  if (bc == Boundary::neumann && sp.k > 1)
    fail(ErrorCode::InsufficientDerivatives, "the C^3 cutoff supports k <= 1 for Neumann");
  for (double t : t_grid)
    if (!(t >= 1.0)) fail(ErrorCode::InvalidArgument, "growth grid must have t >= 1");
  GrowthResult res;
  res.expected = growth_exponent(bc, sp);
  std::vector<double> rs(std::max(1, dilations)), base(rs.size());
  for (std::size_t j = 0; j < rs.size(); ++j) {
    rs[j] = std::pow(2.0, 0.5 * j);
    base[j] = semigroup_space_norm(bc, witness(sp.d, rs[j]), sp, q);
  }
  struct Sample {
    double fixed, best, arg;
  };
  std::vector<std::future<Sample>> jobs;
  for (double t : t_grid) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      Sample s{0, 0, 1};
      for (std::size_t j = 0; j < rs.size(); ++j) {
        const Field u = apply_semigroup(bc, SectorTime::real(t), witness(sp.d, rs[j]), q);
        const double v = semigroup_space_norm(bc, u, sp, q) / base[j];
        if (j == 0) s.fixed = v;
        if (v > s.best) s.best = v, s.arg = rs[j];
      }
      return s;
    }));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Sample s = jobs[i].get();
    res.t.push_back(t_grid[i]);
    res.witness.push_back(s.fixed);
    res.envelope.push_back(s.best);
    res.argmax_r.push_back(s.arg);
  }
  return res;
}

GrowthResult growth_experiment(Boundary bc, const SpaceParams& sp, const std::vector<double>& t_grid,
                               const QuadratureSpec& q, int dilations) {
  GrowthResult res = growth_envelope(bc, sp, t_grid, q, dilations);
  res.fit_witness = fit_loglog(res.t, res.witness, 0.0);
  res.fit_envelope = fit_loglog(res.t, res.envelope, 0.0);
  // both are lower bounds for ‖T(t)‖; the steeper one is the sharper exponent estimate
  res.used_envelope = res.fit_envelope.slope > res.fit_witness.slope;
  res.fit = res.used_envelope ? res.fit_envelope : res.fit_witness;
  if (res.fit.r_squared < 0.98)
    fail(ErrorCode::FitRejected, "growth fit r^2 = " + std::to_string(res.fit.r_squared));
  return res;
}

namespace {

// ∫_a^b F(s) ds on geometric panels
template <class F>
double integrate_s(F&& f, double a, double b) {
  const Rule& gl = gauss_legendre(16);
  KahanSum<double> acc;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, std::max(lo + 0.25, lo * 1.5));
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[i];
      acc.add(0.5 * (hi - lo) * gl.w[i] * f(s));
    }
    lo = hi;
  }
  return acc.sum;
}

}  // namespace

BlowupResult blowup_probe(Boundary bc, double p, double gamma, double t, int levels, double x_probe) {
  if (!(p > 1)) fail(ErrorCode::InvalidArgument, "p must exceed 1");
  if (!(t > 0)) fail(ErrorCode::InvalidArgument, "t must be positive");
  if (!(x_probe > 0 && x_probe < 0.5)) fail(ErrorCode::InvalidArgument, "x_probe must lie in (0,1/2)");
  if (levels < 2) fail(ErrorCode::InvalidArgument, "need at least 2 refinement levels");
  const bool dir = bc == Boundary::dirichlet;
  const double gmin = dir ? 2 * p - 1 : p - 1;
  if (gamma < gmin - 1e-12)
    fail(ErrorCode::HypothesisViolated, "membership needs gamma >= " + std::to_string(gmin));
  const double beta = (p + 1) / (2 * p);
  const double m = std::pow(3.0, 2 * p / (p - 1));
  const double S0 = 8.0, s_out = std::log(4.0 / 3.0), s_kink = std::log(2.0);
  AxialPtr zeta = zeta_cutoff();
  auto zeta_s = [&](double s) { return s >= s_kink ? 1.0 : zeta->eval(std::exp(-s), 0).real(); };

  const double x = x_probe, pre = 1.0 / std::sqrt(4 * M_PI * t);
  // kernel times f times dy/ds with the y-powers cancelled
  auto conv = [&](double s) {
    const double y = std::exp(-s);
    const double g = pre * std::exp(-(x * x + y * y) / (4 * t));
    double k;
    if (dir) {
      const double a = x * y / (2 * t);
      const double shc = a < 1e-8 ? 1.0 : std::sinh(a) / a;
      k = 2 * g * (x / (2 * t)) * shc;
    } else {
      k = 2 * g * std::cosh(x * y / (2 * t));
    }
    return k * std::pow(s, -beta) * zeta_s(s);
  };
  const double c = gamma + 1 - (dir ? 2 : 1) * p;  // y-power in |f|^p y^γ dy/ds
  auto memb = [&](double s) {
    return std::exp(-c * s) * std::pow(s, -beta * p) * std::pow(zeta_s(s), p);
  };

  BlowupResult r;
  double P = integrate_s(conv, s_out, s_kink) + integrate_s(conv, s_kink, S0);
  double M = integrate_s(memb, s_out, s_kink) + integrate_s(memb, s_kink, S0);
  double S = S0;
  for (int j = 0; j < levels; ++j) {
    if (j > 0) {
      P += integrate_s(conv, S, S * m);
      M += integrate_s(memb, S, S * m);
      S *= m;
    }
    r.depth.push_back(S);
    r.partial.push_back(P);
    r.membership.push_back(M);
  }
  r.norm = std::pow(M, 1.0 / p);
  const std::size_t n = r.membership.size();
  const double d1 = r.membership[n - 1] - r.membership[n - 2];
  const double d0 = n >= 3 ? r.membership[n - 2] - r.membership[n - 3] : d1;
  r.norm_converged = std::isfinite(M) && (d1 <= 0.5 * d0 || d1 <= 1e-12 * M);
  r.min_growth = kInf;
  for (std::size_t j = 1; j < r.partial.size(); ++j)
    r.min_growth = std::min(r.min_growth, r.partial[j] / r.partial[j - 1]);
  r.diverges = r.min_growth >= 2.0;
  return r;
}

std::vector<double> log_integral_partials(double beta, double S0, double m, int levels) {
  std::vector<double> out;
  auto f = [&](double s) { return std::pow(s, -beta); };
  double S = S0, v = integrate_s(f, std::log(2.0), S0);
  for (int j = 0; j < levels; ++j) {
    if (j > 0) {
      v += integrate_s(f, S, S * m);
      S *= m;
    }
    out.push_back(v);
  }
  return out;
}

namespace {

// |1 - e^{-w}| or |1 + e^{-w}| without cancellation
double one_pm_exp(cplx w, double sign) {
  const double a = -w.real(), b = -w.imag();
  if (sign < 0) {
    // 1 - e^{-w} = -expm1(-w)
    const double re = std::expm1(a) * std::cos(b) - 2 * std::sin(0.5 * b) * std::sin(0.5 * b);
    const double im = std::exp(a) * std::sin(b);
    return std::hypot(re, im);
  }
  return std::abs(1.0 + std::exp(cplx(a, b)));
}

}  // namespace

SectorBound kernel_sector_bound_check(Boundary bc, double delta, const std::vector<double>& t_grid,
                                      const std::vector<double>& xy_grid) {
  if (!(delta >= 0 && delta < M_PI / 2)) fail(ErrorCode::InvalidArgument, "delta must lie in [0, pi/2)");
  const double cd = std::cos(delta), sign = bc == Boundary::dirichlet ? -1.0 : 1.0;
  SectorBound out;
  out.bound = bc == Boundary::dirichlet ? 1.0 / cd : 1.0;
  out.normalized_bound = bc == Boundary::dirichlet ? std::pow(cd, -1.5) : std::pow(cd, -0.5);
  for (double t : t_grid) {
    for (double x : xy_grid)
      for (double y : xy_grid) {
        if (!(x > 0 && y > 0)) continue;
        // |G_z(x-y)| (1 ∓ e^{-xy/z}) against (4πt)^{-1/2} e^{-cosδ(x-y)²/4t} (1 ∓ e^{-cosδ xy/t})
        // polar form of |G_z(x-y)| and of xy/z
        const double gz = std::exp(-cd * (x - y) * (x - y) / (4 * t)) / std::sqrt(4 * M_PI * t);
        const double num = gz * one_pm_exp(std::polar(x * y / t, -delta), sign);
        const double a = cd * x * y / t;
        const double gd = std::exp(-cd * (x - y) * (x - y) / (4 * t)) / std::sqrt(4 * M_PI * t);
        const double den = gd * (sign < 0 ? -std::expm1(-a) : 1.0 + std::exp(-a));
        if (!(den > 0)) continue;
        out.ratio = std::max(out.ratio, num / den);
      }
  }
  out.normalized_ratio = out.ratio / std::sqrt(cd);
  return out;
}

}  // namespace hsl
