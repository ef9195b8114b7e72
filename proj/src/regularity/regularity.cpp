#include "regularity/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/errors.hpp"
#include "kernels/semigroup.hpp"
#include "oracle/spectral.hpp"
#include "resolvent/resolvent.hpp"

namespace hsl {

namespace {

// slope of log y against log x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::log(x[i]) - mx;
    sxy += a * (std::log(y[i]) - my);
    sxx += a * a;
  }
  return sxy / sxx;
}

Field dilate(const Field& f, double r, cplx amp = 1.0) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) out.push_back({t.coef * amp, std::make_shared<ScaledArg>(t.axial, r), {}});
  return Field(1, std::move(out));
}

cplx eval_axis(const Field& f, double x, const MultiIndex& a = {0, 0, 0}) {
  return f.eval(x, std::vector<double>(f.dim() - 1, 0.0), a);
}

MultiIndex laplace_probe(int d) { return d == 1 ? MultiIndex{2, 0, 0} : MultiIndex{0, 0, 0}; }

}  // namespace

// ---------------------------------------------------------------- elliptic

EllipticMethod parse_elliptic_method(const std::string& s) {
  if (s == "images") return EllipticMethod::images;
  if (s == "transform") return EllipticMethod::transform;
  fail(ErrorCode::InvalidArgument, "unknown elliptic method '" + s + "'");
}

Field elliptic_solve(Boundary bc, cplx lambda, const Field& f, const EllipticOptions& opt) {
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0) fail(ErrorCode::BranchCut, "lambda on (-inf,0]");
  if (f.is_zero()) return f;
  if (opt.method == EllipticMethod::transform) {
    if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "the transform method is one-dimensional");
    return oracle_function_calculus(bc, [lambda](double s) { return 1.0 / (lambda + s); }, 0.0, f);
  }
  if (f.dim() != 1) return resolvent_laplace(bc, lambda, f);
  std::vector<Term> out;
  for (const auto& t : f.terms()) out.push_back({t.coef, std::make_shared<GreenAxial>(t.axial, lambda, bc, opt.nodes), {}});
  return Field(1, std::move(out));
}

double weighted_derivative_sum(const Field& u, cplx lambda, const std::function<double(const Field&)>& norm) {
  double s = 0.0;
  for (int n = 0; n <= 2; ++n) {
    const double c = std::pow(std::abs(lambda), 1.0 - 0.5 * n);
    for (const auto& b : multi_indices(u.dim(), n)) s += c * norm(u.derivative(b));
  }
  return s;
}

EllipticRegularityReport elliptic_regularity_check(Boundary bc, const SpaceParams& sp,
                                                   const std::vector<cplx>& lambda_grid,
                                                   const std::vector<Field>& battery, double eps,
                                                   const QuadratureSpec& q) {
  sp.validate();
  if (lambda_grid.empty() || battery.empty()) fail(ErrorCode::InvalidArgument, "empty lambda grid or battery");
  const RateFunction g{RateFunction::g, sp.p, sp.k, sp.gamma, 0.0};
  const RateFunction h{RateFunction::h, sp.p, sp.k, sp.gamma, eps};
  auto X = [&](const Field& v) { return semigroup_space_norm(bc, v, sp, q); };

  EllipticRegularityReport rep;
  rep.h_applies = sp.main_weight() > 2 * sp.p - 1;
  rep.h_exponent = h.exponent();
  std::vector<double> fnorm;
  for (const auto& f : battery) fnorm.push_back(X(f));

  // envelopes keyed by |λ|
  std::map<double, double> env, env_g;
  std::map<std::pair<double, std::size_t>, std::pair<double, double>> by_arg;  // (|λ|, field) → min, max
  for (cplx lam : lambda_grid) {
    const double mod = std::abs(lam);
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const Field u = elliptic_solve(bc, lam, battery[i]);
      EllipticEntry e;
      e.lambda = lam;
      e.field = i;
      e.ratio = weighted_derivative_sum(u, lam, X) / fnorm[i];
      e.g = g(lam);
      e.ratio_over_g = e.ratio / e.g;
      rep.entries.push_back(e);
      rep.C = std::max(rep.C, e.ratio_over_g);
      env[mod] = std::max(env[mod], e.ratio);
      env_g[mod] = std::max(env_g[mod], e.ratio_over_g);
      auto [it, fresh] = by_arg.try_emplace({mod, i}, e.ratio, e.ratio);
      if (!fresh) it->second = {std::min(it->second.first, e.ratio), std::max(it->second.second, e.ratio)};
    }
  }
  for (const auto& [key, mm] : by_arg) rep.rotation_spread = std::max(rep.rotation_spread, mm.second / mm.first);

  const double lo = env.begin()->first;
  std::vector<double> m, e1, e2;
  for (const auto& [mod, v] : env)
    if (mod <= 10.0 * lo * (1 + 1e-12)) {
      m.push_back(mod);
      e1.push_back(v);
      e2.push_back(env_g[mod]);
    }
  rep.fitted_exponent = -ls_slope(m, e1);
  rep.ratio_over_g_slope = ls_slope(m, e2);
  return rep;
}

ScalingReport homogeneous_scaling_check(Boundary bc, const SpaceParams& sp, const std::vector<double>& r_set,
                                        cplx lambda, const Field& f, const QuadratureSpec& q) {
  sp.validate(false);
  if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "scaling check is one-dimensional");
  if (r_set.empty()) fail(ErrorCode::InvalidArgument, "empty r set");
  const Field u = elliptic_solve(bc, lambda, f);
  auto W = [&](const Field& v) { return homogeneous_sobolev_norm(v, sp, q); };
  ScalingReport rep;
  double rmin = kInf, rmax = 0.0;
  for (double r : r_set) {
    if (!(r > 0)) fail(ErrorCode::InvalidArgument, "dilation factor must be positive");
    const cplx lr = r * r * lambda;
    const Field ur = dilate(u, r), Fr = dilate(f, r, r * r);
    ScalingEntry e;
    e.r = r;
    e.residual = resolvent_residual(lr, ur, Fr, sp.p, sp.gamma, q) / weighted_lp_norm(Fr, sp.p, sp.gamma, q);
    e.ratio = weighted_derivative_sum(ur, lr, W) / W(Fr);
    rep.entries.push_back(e);
    rep.max_residual = std::max(rep.max_residual, e.residual);
    rmin = std::min(rmin, e.ratio);
    rmax = std::max(rmax, e.ratio);
  }
  rep.ratio_spread = rmax / rmin;
  return rep;
}

// ---------------------------------------------------------------- parabolic

void TimeWeight::validate() const {
  if (!(q > 1.0)) fail(ErrorCode::InvalidArgument, "time exponent q must exceed 1");
  if (!(eta > -1.0 && eta < q - 1.0))
    fail(ErrorCode::InvalidArgument, "time weight t^eta needs eta in (-1, q-1)");
}

Field TimeField::at(double t) const {
  if (terms.empty()) fail(ErrorCode::InvalidArgument, "empty time field");
  Field f = Field::zero(terms.front().phi.dim());
  for (const auto& tt : terms) {
    const cplx a = tt.a(t);
    if (a != 0.0) f = f + tt.phi.scaled(a);
  }
  return f;
}

TimeField TimeField::exponential(double rate, const Field& phi, cplx coef) {
  return TimeField{{{[rate, coef](double t) { return coef * std::exp(-rate * t); }, phi}}};
}

namespace {

// nodes on [0,t]: `panels` uniform panels, the last one split geometrically toward s = t
void duhamel_nodes(double t, int panels, int grading, int n, std::vector<double>& s, std::vector<double>& w) {
  std::vector<double> br;
  const double h = t / panels;
  for (int i = 1; i < panels; ++i) br.push_back(i * h);
  for (int j = 1; j <= grading; ++j) br.push_back(t - h * std::ldexp(1.0, -j));
  panel_nodes(make_panels(0.0, t, br, kInf), n, s, w);
}

// k(s) = Σ c_j G_{σ_j}(s): the time quadrature folded into one image-kernel profile (d = 1)
class HeatSumFamily final : public KernelFamily {
 public:
  HeatSumFamily(std::vector<cplx> c, std::vector<double> sigma) : c_(std::move(c)), sigma_(std::move(sigma)) {
    const double lo = *std::min_element(sigma_.begin(), sigma_.end());
    const double hi = *std::max_element(sigma_.begin(), sigma_.end());
    reach_ = std::sqrt(4.0 * hi * 60.0);
    near_ = 0.5 * std::sqrt(lo);
    far_ = std::max(near_, std::sqrt(hi));
  }
  cplx raw(double s, int n, int r) const override {
    const int m = 2 * n + r;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < c_.size(); ++j) {
      const double sg = sigma_[j];
      if (s * s > 240.0 * sg) continue;
      const double irs = 1.0 / std::sqrt(4.0 * sg), v = s * irs;
      double h0 = 1.0, h1 = 2.0 * v, hm = m == 0 ? h0 : h1;
      for (int k = 1; k < m; ++k) {
        const double h2 = 2.0 * v * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
        hm = h2;
      }
      acc += c_[j] * ((m % 2 ? -1.0 : 1.0) * std::pow(irs, m) * std::exp(-v * v) * hm / std::sqrt(4.0 * M_PI * sg));
    }
    return acc;
  }
  cplx S(int) const override { return 0.0; }
  double reach() const override { return reach_; }
  double near_scale() const override { return near_; }
  double far_scale() const override { return far_; }

 private:
  std::vector<cplx> c_;
  std::vector<double> sigma_;
  double reach_, near_, far_;
};

Field duhamel_field(Boundary bc, const TimeField& f, double t, int panels, const DuhamelOptions& opt,
                    bool direct = false) {
  const int d = f.terms.front().phi.dim();
  Field u = Field::zero(d);
  if (!(t > 0)) return u;
  std::vector<double> s, w;
  duhamel_nodes(t, panels, opt.grading, opt.nodes, s, w);
  for (const auto& tt : f.terms) {
    if (tt.phi.is_zero()) continue;
    if (d == 1) {
      std::vector<cplx> c;
      std::vector<double> sigma;
      for (std::size_t j = 0; j < s.size(); ++j) {
        c.push_back(w[j] * tt.a(s[j]));
        sigma.push_back(t - s[j]);
      }
      auto fam = std::make_shared<HeatSumFamily>(std::move(c), std::move(sigma));
      fam->set_direct(direct);
      std::vector<Term> out;
      for (const auto& term : tt.phi.terms())
        out.push_back({term.coef, std::make_shared<ImageKernelAxial>(term.axial, fam, bc), {}});
      u = u + Field(1, std::move(out));
      continue;
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
      const cplx a = tt.a(s[j]);
      if (a == 0.0) continue;
      u = u + apply_semigroup(bc, SectorTime::real(t - s[j]), tt.phi, opt.quad).scaled(w[j] * a);
    }
  }
  return u;
}

std::vector<double> sample_points(const TimeField& f) {
  double E = 0.0;
  for (const auto& tt : f.terms)
    if (!tt.phi.is_zero()) E = std::max(E, tt.phi.extent());
  E = std::min(std::max(E, 1.0), 8.0);
  return {0.1 * E, 0.3 * E, 0.55 * E, 0.9 * E};
}

bool all_zero(const TimeField& f) {
  for (const auto& tt : f.terms)
    if (!tt.phi.is_zero()) return false;
  return true;
}

}  // namespace

DuhamelSolution duhamel_solve(Boundary bc, const TimeField& f, const std::vector<double>& t_grid,
                              const DuhamelOptions& opt) {
  if (f.terms.empty()) fail(ErrorCode::InvalidArgument, "empty time field");
  if (opt.panels < 1 || opt.nodes < 2 || opt.grading < 0) fail(ErrorCode::InvalidArgument, "bad Duhamel options");
  const int d = f.terms.front().phi.dim();
  const MultiIndex lp = laplace_probe(d);
  const auto xs = sample_points(f);
  DuhamelSolution sol;
  for (double t : t_grid) {
    if (!(t >= 0) || !std::isfinite(t)) fail(ErrorCode::InvalidArgument, "time must be finite and >= 0");
    // trial levels evaluate kernels directly (a few points each); the accepted level is rebuilt tabulated
    Field u = duhamel_field(bc, f, t, opt.panels, opt, true);
    int halvings = 0;
    if (!u.is_zero()) {
      for (;; ++halvings) {
        if (halvings == opt.max_halvings)
          fail(ErrorCode::TimeStepNotConverged, "Duhamel integral still changing at t=" + std::to_string(t));
        const Field v = duhamel_field(bc, f, t, opt.panels << (halvings + 1), opt, true);
        const Field lu = d == 1 ? u : u.laplacian(), lv = d == 1 ? v : v.laplacian();
        double diff = 0, mag = 0;
        auto cmp = [&](const Field& a, const Field& b, const MultiIndex& al) {
          for (double x : xs) {
            const cplx vb = eval_axis(b, x, al);
            diff = std::max(diff, std::abs(eval_axis(a, x, al) - vb));
            mag = std::max(mag, std::abs(vb));
          }
        };
        cmp(u, v, {0, 0, 0});
        cmp(lu, lv, lp);
        u = v;
        if (diff <= opt.tol * std::max(mag, 1e-300)) break;
      }
      u = duhamel_field(bc, f, t, opt.panels << (halvings + 1), opt);
    }
    sol.t.push_back(t);
    sol.u.push_back(u);
    sol.lap.push_back(u.is_zero() ? u : u.laplacian());
    sol.dt.push_back(f.at(t) + sol.lap.back());
    sol.halvings.push_back(halvings);
  }
  return sol;
}

double duhamel_integrated_residual(Boundary bc, const TimeField& f, double t, const Field& u_t,
                                   const std::vector<double>& x_samples, const DuhamelOptions& opt,
                                   int tau_panels, int tau_nodes) {
  std::vector<double> br;
  for (int i = 1; i < tau_panels; ++i) br.push_back(t * i / tau_panels);
  for (int j = 1; j <= 3; ++j) br.push_back(t / tau_panels * std::ldexp(1.0, -j));
  std::vector<double> tau, w;
  panel_nodes(make_panels(0.0, t, br, kInf), tau_nodes, tau, w);
  std::vector<cplx> acc(x_samples.size(), 0.0);
  for (std::size_t j = 0; j < tau.size(); ++j) {
    const Field lap = duhamel_field(bc, f, tau[j], 2 * opt.panels, opt).laplacian();
    const Field ft = f.at(tau[j]);
    for (std::size_t i = 0; i < x_samples.size(); ++i)
      acc[i] += w[j] * (eval_axis(lap, x_samples[i]) + eval_axis(ft, x_samples[i]));
  }
  double res = 0, mag = 0;
  for (std::size_t i = 0; i < x_samples.size(); ++i) {
    const cplx ux = eval_axis(u_t, x_samples[i]);
    res = std::max(res, std::abs(ux - acc[i]));
    mag = std::max(mag, std::abs(ux));
  }
  return res / std::max(mag, 1e-300);
}

namespace {

struct TimeRule {
  std::vector<double> t, w;  // w includes t^η
};

// (0, T 2^{-L}) by Gauss-Jacobi with weight t^η, then dyadic Gauss-Legendre panels up to T
TimeRule time_rule(double T, double eta, int levels, int n) {
  TimeRule r;
  const double a0 = T * std::ldexp(1.0, -levels);
  const Rule gj = gauss_jacobi01(n, eta);
  for (std::size_t i = 0; i < gj.size(); ++i) {
    r.t.push_back(a0 * gj.x[i]);
    r.w.push_back(std::pow(a0, eta + 1.0) * gj.w[i]);
  }
  std::vector<Interval> panels;
  for (double a = a0; a < T * (1 - 1e-12); a *= 2.0) panels.push_back({a, std::min(2.0 * a, T)});
  std::vector<double> t, w;
  panel_nodes(panels, n, t, w);
  for (std::size_t i = 0; i < t.size(); ++i) {
    r.t.push_back(t[i]);
    r.w.push_back(w[i] * std::pow(t[i], eta));
  }
  return r;
}

double max_reg_ratio(Boundary bc, const SpaceParams& sp, const TimeWeight& tw, double T, const TimeField& f,
                     int levels, int nodes, const DuhamelOptions& dopt) {
  const TimeRule tr = time_rule(T, tw.eta, levels, nodes);
  const DuhamelSolution sol = duhamel_solve(bc, f, tr.t, dopt);
  auto X = [&](const Field& v) { return v.is_zero() ? 0.0 : semigroup_space_norm(bc, v, sp, dopt.quad); };
  double A = 0, B = 0, F = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    A += tr.w[i] * std::pow(X(sol.dt[i]), tw.q);
    B += tr.w[i] * std::pow(X(sol.lap[i]), tw.q);
    F += tr.w[i] * std::pow(X(f.at(tr.t[i])), tw.q);
  }
  return (std::pow(A, 1.0 / tw.q) + std::pow(B, 1.0 / tw.q)) / std::pow(F, 1.0 / tw.q);
}

}  // namespace

MaxRegReport maximal_regularity_check(Boundary bc, const SpaceParams& sp, const TimeWeight& tw, double T,
                                      const std::vector<TimeField>& battery, const MaxRegOptions& opt) {
  sp.validate();
  tw.validate();
  if (!(T > 0) || !std::isfinite(T)) fail(ErrorCode::InvalidArgument, "T must be finite and positive");
  MaxRegReport rep;
  rep.vacuous = true;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    if (battery[i].terms.empty() || all_zero(battery[i])) continue;
    rep.vacuous = false;
    MaxRegEntry e;
    e.field = i;
    e.ratio_coarse = max_reg_ratio(bc, sp, tw, T, battery[i], opt.time_levels, opt.time_nodes, opt.duhamel);
    DuhamelOptions fine = opt.duhamel;
    fine.panels *= 2;
    fine.quad.n_bulk *= 2;
    e.ratio_fine = max_reg_ratio(bc, sp, tw, T, battery[i], opt.time_levels + 1, 2 * opt.time_nodes, fine);
    e.change = std::max(e.ratio_fine / e.ratio_coarse, e.ratio_coarse / e.ratio_fine);
    rep.C = std::max({rep.C, e.ratio_coarse, e.ratio_fine});
    rep.max_change = std::max(rep.max_change, e.change);
    rep.entries.push_back(e);
  }
  return rep;
}

// ---------------------------------------------------------------- weak setting

int WeakDatum::dim() const {
  if (components.size() < 2 || components.size() > 4)
    fail(ErrorCode::InvalidArgument, "a weak datum has d+1 components, d in {1,2,3}");
  return static_cast<int>(components.size()) - 1;
}

cplx pairing(const Field& u, const Field& phi, const QuadratureSpec& q) {
  if (u.dim() != phi.dim()) fail(ErrorCode::InvalidArgument, "dimension mismatch in pairing");
  if (u.is_zero() || phi.is_zero()) return 0.0;
  const int d = u.dim();
  std::vector<std::vector<double>> xt;
  std::vector<double> wt{1.0};
  for (int j = 0; j + 1 < d; ++j) {
    const double L = std::min(u.tangential_extent(j), phi.tangential_extent(j));
    if (!std::isfinite(L)) fail(ErrorCode::TailNotConverged, "tangential factors do not decay");
    std::vector<double> x, w;
    tangential_nodes(L, std::min(u.tangential_scale(j), phi.tangential_scale(j)), q.n_tangential, x, w);
    std::vector<double> nw;
    for (double a : wt)
      for (double b : w) nw.push_back(a * b);
    wt = std::move(nw);
    xt.push_back(std::move(x));
  }
  const double E = std::min(u.extent(), phi.extent());
  if (!std::isfinite(E)) fail(ErrorCode::TailNotConverged, "pairing needs a decaying factor");
  std::vector<double> br = u.breakpoints(), pb = phi.breakpoints();
  br.insert(br.end(), pb.begin(), pb.end());
  for (double b = std::min(1.0, E); b > 1e-8; b *= 0.5) br.push_back(b);
  const double h = 2.0 * std::min(u.scale(), phi.scale());
  std::vector<double> x, w;
  panel_nodes(make_panels(0.0, E, br, h), q.n_bulk, x, w);
  std::vector<cplx> uv, pv;
  u.eval_grid(x, xt, {0, 0, 0}, uv);
  phi.eval_grid(x, xt, {0, 0, 0}, pv);
  const std::size_t nt = wt.size();
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < nt; ++j) s += w[i] * wt[j] * uv[i * nt + j] * pv[i * nt + j];
  return s;
}

WeakPairing weak_setting_apply(const SectorTime& z, const WeakDatum& wd, const Field& phi, const QuadratureSpec& q) {
  const int d = wd.dim();
  if (phi.dim() != d) fail(ErrorCode::InvalidArgument, "test function dimension differs from the datum");
  WeakPairing r;
  for (int j = 0; j <= d; ++j) {
    const Field& fj = wd.components[j];
    if (!fj.is_zero() && fj.dim() != d) fail(ErrorCode::InvalidArgument, "component dimension mismatch");
    cplx part = 0.0;
    if (!fj.is_zero()) {
      if (j == 0) {
        part = pairing(apply_semigroup(Boundary::dirichlet, z, fj, q), phi, q);
      } else {
        MultiIndex a{0, 0, 0};
        a[j - 1] = 1;
        const Boundary bc = j == 1 ? Boundary::neumann : Boundary::dirichlet;
        part = -pairing(apply_semigroup(bc, z, fj, q), phi.derivative(a), q);
      }
    }
    r.parts.push_back(part);
    r.value += part;
  }
  return r;
}

double weak_representation_norm(const WeakDatum& wd, double p, double gamma, const QuadratureSpec& q) {
  wd.dim();
  double s = 0.0;
  for (const auto& f : wd.components)
    if (!f.is_zero()) s += weighted_lp_norm(f, p, gamma, q);
  return s;
}

}  // namespace hsl
