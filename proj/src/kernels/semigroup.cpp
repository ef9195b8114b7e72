#include "kernels/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace hsl {

namespace {

constexpr double kWindowExp = 60.0;  // kernel dropped below e^{-60}

struct Onset {
  bool smooth = true;
  double exponent = 0.0;
};

// crude look at f near 0: smooth Taylor start, or a power y^e
Onset probe_onset(const Axial& f) {
  Onset o;
  if (f.support_lo() > 0.0) return o;
  const double a = 1e-9;
  const cplx f1 = f.eval(a, 0), f2 = f.eval(2 * a, 0), f4 = f.eval(4 * a, 0);
  const double mag = std::max({std::abs(f1), std::abs(f2), std::abs(f4), 1e-300});
  const double d1 = std::abs(f2 - f1), d2 = std::abs(f4 - f2);
  if (std::isfinite(mag) && d1 <= 1e-12 * mag && d2 <= 1e-12 * mag) return o;
  if (std::isfinite(mag) && d1 > 0) {
    const double e = std::log2(d2 / d1);
    if (e > 0.999 && std::abs(e - std::round(e)) < 1e-3) return o;
  }
  o.smooth = false;
  const double r = std::abs(f2) / std::abs(f1);
  o.exponent = (std::isfinite(r) && r > 0) ? std::log2(r) : -1.0;
  return o;
}

// ∫ y^kappa |f| over shells of log-depth; growing shells mean the kernel
// integral has no limit at the boundary
void check_boundary_integrable(const Axial& f, double kappa) {
  const Rule& gl = gauss_legendre(16);
  const double s[] = {10.0, 20.0, 40.0, 80.0, 160.0};
  double shell[4] = {0, 0, 0, 0}, total = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double a = s[j], b = s[j + 1];
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double si = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[i];
      const double y = std::exp(-si);
      const double v = std::abs(f.eval(y, 0)) * std::pow(y, kappa + 1.0);
      shell[j] += 0.5 * (b - a) * gl.w[i] * v;
    }
    total += shell[j];
  }
  if (!std::isfinite(total) || (shell[3] >= 0.5 * shell[2] && shell[3] > 1e-12 * total))
    fail(ErrorCode::QuadratureDiverged,
         "kernel integral does not converge at the boundary (shell ratio " +
             std::to_string(shell[3] / shell[2]) + ")");
}

}  // namespace

SemigroupAxial::SemigroupAxial(AxialPtr f, cplx z, Boundary bc, const QuadratureSpec& q)
    : z_(z), bc_(bc) {
  q.validate();
  if (!(z.real() > 0.0)) fail(ErrorCode::SectorViolation, "semigroup needs Re z > 0");
  const double E = f->extent();
  if (!std::isfinite(E)) fail(ErrorCode::TailNotConverged, "input profile does not decay");
  const double az = std::abs(z), cth = std::cos(std::arg(z));
  real_ = z.imag() == 0.0;
  window_ = std::sqrt(4.0 * az * kWindowExp / cth);
  const double im = std::abs((1.0 / (4.0 * z)).imag());
  double h = std::min(f->scale(), 0.75 * std::sqrt(az / cth));
  if (im > 0) h = std::min(h, M_PI / (window_ * im));
  extent_ = E + window_;
  scale_ = std::sqrt(f->scale() * f->scale() + az * cth * cth);

  const double lo = f->support_lo();
  std::vector<double> breaks = f->breakpoints();
  std::vector<double> w;
  const Onset on = probe_onset(*f);
  double start = lo;
  if (!on.smooth) {
    check_boundary_integrable(*f, bc == Boundary::dirichlet ? 1.0 : 0.0);
    // Gauss-Jacobi cell (0,a0) then geometric panels up to h
    const double a0 = std::ldexp(1.0, -40);
    const double e = std::clamp(on.exponent, -0.99, 20.0);
    Rule gj = gauss_jacobi01(q.n_boundary, e);
    for (std::size_t i = 0; i < gj.size(); ++i) {
      y_.push_back(a0 * gj.x[i]);
      w.push_back(a0 * gj.w[i] * std::pow(gj.x[i], -e));
    }
    for (double b = a0; b < h; b *= 2.0) breaks.push_back(b);
    start = a0;
  }
  panel_nodes(make_panels(start, E, breaks, h), q.n_bulk, y_, w);
  std::vector<cplx> fv;
  f->eval_batch(y_, 0, fv);
  wf_.resize(y_.size());
  for (std::size_t i = 0; i < y_.size(); ++i) wf_[i] = w[i] * fv[i];
}

double SemigroupAxial::cost() const {
  return std::max(1.0, static_cast<double>(y_.size()));
}

template <class T>
cplx SemigroupAxial::sum_window(double x, int m) const {
  T zz;
  if constexpr (std::is_same_v<T, double>) zz = z_.real();
  else zz = z_;
  const T inv_rs = 1.0 / std::sqrt(4.0 * zz);
  const T pref = (m % 2 == 0 ? 1.0 : -1.0) * std::pow(inv_rs, m) / std::sqrt(4.0 * M_PI * zz);
  const double sign = bc_ == Boundary::dirichlet ? -1.0 : 1.0;
  auto kern = [&](double u) -> T {
    const T v = u * inv_rs;
    T h0 = 1.0, h1 = 2.0 * v;
    T hm = m == 0 ? h0 : h1;
    for (int k = 1; k < m; ++k) {
      const T h2 = 2.0 * v * h1 - 2.0 * static_cast<double>(k) * h0;
      h0 = h1;
      h1 = h2;
      hm = h2;
    }
    return std::exp(-v * v) * hm;
  };
  const auto b = std::lower_bound(y_.begin(), y_.end(), x - window_) - y_.begin();
  const auto e = std::upper_bound(y_.begin(), y_.end(), x + window_) - y_.begin();
  cplx s = 0.0;
  for (auto j = b; j < e; ++j) {
    T k = kern(x - y_[j]);
    if (x + y_[j] <= window_) k += sign * kern(x + y_[j]);
    s += k * wf_[j];
  }
  return cplx(pref) * s;
}

cplx SemigroupAxial::eval(double x, int m) const {
  return real_ ? sum_window<double>(x, m) : sum_window<cplx>(x, m);
}

void SemigroupAxial::eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const {
  out.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i], m);
}

Field apply_semigroup(Boundary bc, const SectorTime& z, const Field& f, const QuadratureSpec& q) {
  z.validate();
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    Term n{t.coef, std::make_shared<SemigroupAxial>(t.axial, z.z, bc, q), {}};
    for (const auto& g : t.tang) n.tang.push_back(g.heat(z.z));
    out.push_back(std::move(n));
  }
  return Field(f.dim(), std::move(out));
}

double generator_residual(Boundary bc, const Field& f, double h, const QuadratureSpec& q,
                          const SpaceParams& sp) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "step h must be positive");
  if (f.is_zero()) return 0.0;
  if (f.k_max() < 2) fail(ErrorCode::InsufficientDerivatives, "generator residual needs k_max >= 2");
  const Field th = apply_semigroup(bc, SectorTime::real(h), f, q);
  const Field r = (th - f).scaled(1.0 / h) - f.laplacian();
  return weighted_lp_norm(r, sp.p, sp.main_weight(), q);
}

}  // namespace hsl
