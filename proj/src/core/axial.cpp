#include "core/axial.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace hsl {

void Axial::eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const {
  out.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i], m);
}

// ---------------------------------------------------------------- ExpPoly

namespace {

constexpr int kExpPrecompute = 8;

std::vector<ExpTerm> merge(std::vector<ExpTerm> t) {
  std::vector<ExpTerm> out;
  for (const auto& e : t) {
    if (e.c == cplx(0.0)) continue;
    bool done = false;
    for (auto& o : out)
      if (o.a == e.a && o.b == e.b && o.q == e.q) {
        o.c += e.c;
        done = true;
        break;
      }
    if (!done) out.push_back(e);
  }
  return out;
}

std::vector<ExpTerm> diff(const std::vector<ExpTerm>& t) {
  std::vector<ExpTerm> out;
  for (const auto& e : t) {
    if (e.a != 0.0) out.push_back({e.c * e.a, e.a - 1.0, e.b, e.q});
    if (e.b != cplx(0.0)) out.push_back({-e.c * e.b, e.a, e.b, e.q});
    if (e.q != cplx(0.0)) out.push_back({-2.0 * e.c * e.q, e.a + 1.0, e.b, e.q});
  }
  return merge(out);
}

double term_extent(const ExpTerm& e) {
  const double rb = e.b.real(), rq = e.q.real();
  if (rb <= 0.0 && rq <= 0.0) return kInf;
  auto lg = [&](double x) {
    return std::log(std::abs(e.c)) + e.a * std::log(x) - rb * x - rq * x * x;
  };
  const double target = std::log(1e-22);
  double hi = 1.0;
  while (lg(hi) > target && hi < 1e9) hi *= 2.0;
  double lo = hi / 2.0;
  if (hi <= 1.0) return 1.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (lg(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) {
  derivs_.push_back(merge(std::move(terms)));
  for (int m = 1; m <= kExpPrecompute; ++m) derivs_.push_back(diff(derivs_.back()));
  extent_ = 0.0;
  scale_ = 1.0;
  for (int m = 0; m <= 2; ++m)
    for (const auto& e : derivs_[m]) extent_ = std::max(extent_, term_extent(e));
  for (const auto& e : derivs_[0]) {
    if (std::abs(e.b) > 0) scale_ = std::min(scale_, 1.0 / std::abs(e.b));
    if (std::abs(e.q) > 0) scale_ = std::min(scale_, 1.0 / std::sqrt(std::abs(e.q)));
  }
}

std::vector<ExpTerm> ExpPoly::terms_at(int m) const {
  if (m <= kExpPrecompute) return derivs_[m];
  std::vector<ExpTerm> t = derivs_[kExpPrecompute];
  for (int i = kExpPrecompute; i < m; ++i) t = diff(t);
  return t;
}

cplx ExpPoly::eval(double x, int m) const {
  const std::vector<ExpTerm>* t;
  std::vector<ExpTerm> tmp;
  if (m <= kExpPrecompute) {
    t = &derivs_[m];
  } else {
    tmp = terms_at(m);
    t = &tmp;
  }
  cplx s = 0.0;
  for (const auto& e : *t) {
    const double xa = e.a == 0.0 ? 1.0 : std::pow(x, e.a);
    s += e.c * xa * std::exp(-e.b * x - e.q * x * x);
  }
  return s;
}

// ---------------------------------------------------------------- Poly

double Poly::eval(double t) const {
  double s = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * t + c[i];
  return s;
}

Poly Poly::deriv() const {
  Poly d;
  for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * static_cast<double>(i));
  return d;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  if (c.empty() || o.c.empty()) return r;
  r.c.assign(c.size() + o.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.c.assign(std::max(c.size(), o.c.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
  return r;
}

Poly Poly::scaled(double s) const {
  Poly r = *this;
  for (auto& v : r.c) v *= s;
  return r;
}

Poly Poly::pow(const Poly& p, int n) {
  Poly r{{1.0}};
  for (int i = 0; i < n; ++i) r = r * p;
  return r;
}

// ---------------------------------------------------------------- PiecewisePoly

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces, double left,
                             double right, int smoothness, std::vector<double> origins)
    : breaks_(std::move(breaks)), origins_(std::move(origins)), left_(left), right_(right),
      smoothness_(smoothness) {
  if (breaks_.size() != pieces.size() + 1 || pieces.empty())
    fail(ErrorCode::InvalidArgument, "piecewise polynomial needs n+1 breaks for n pieces");
  if (origins_.empty()) origins_.assign(breaks_.begin(), breaks_.end() - 1);
  if (origins_.size() != pieces.size()) fail(ErrorCode::InvalidArgument, "one origin per piece");
  std::size_t deg = 0;
  for (const auto& p : pieces) deg = std::max(deg, p.c.size());
  dpieces_.push_back(std::move(pieces));
  for (std::size_t m = 1; m <= deg + 1; ++m) {
    std::vector<Poly> d;
    for (const auto& p : dpieces_.back()) d.push_back(p.deriv());
    dpieces_.push_back(std::move(d));
  }
  scale_ = kInf;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    scale_ = std::min(scale_, 0.5 * (breaks_[i + 1] - breaks_[i]));
  scale_ = std::min(scale_, 1.0);
}

cplx PiecewisePoly::eval(double x, int m) const {
  if (x < breaks_.front()) return m == 0 ? left_ : 0.0;
  if (x >= breaks_.back()) return m == 0 ? right_ : 0.0;
  if (m >= static_cast<int>(dpieces_.size())) return 0.0;
  std::size_t i = std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin() - 1;
  return dpieces_[m][i].eval(x - origins_[i]);
}

double PiecewisePoly::extent() const { return right_ == 0.0 ? breaks_.back() : kInf; }

// ---------------------------------------------------------------- PowerTimes

namespace {
double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace

cplx PowerTimes::eval(double x, int m) const {
  if (m > base_->max_order())
    fail(ErrorCode::DerivativeOrderLost,
         "order " + std::to_string(m) + " exceeds the product-rule closure (" +
             std::to_string(base_->max_order()) + ")");
  cplx s = 0.0;
  double ff = 1.0;  // theta (theta-1) ... (theta-j+1)
  for (int j = 0; j <= m; ++j) {
    if (j > 0) ff *= (theta_ - j + 1);
    if (ff == 0.0) break;
    s += binom(m, j) * ff * std::pow(x, theta_ - j) * base_->eval(x, m - j);
  }
  return s;
}

double PowerTimes::extent() const {
  double e = base_->extent();
  if (!std::isfinite(e) || theta_ <= 0) return e;
  return e * (1.0 + 0.05 * theta_);
}

// ---------------------------------------------------------------- Product / ScaledArg / Sum

cplx ProductAxial::eval(double x, int m) const {
  cplx s = 0.0;
  for (int j = 0; j <= m; ++j) {
    cplx bv = b_->eval(x, m - j);
    if (bv == cplx(0.0)) continue;
    s += binom(m, j) * a_->eval(x, j) * bv;
  }
  return s;
}

std::vector<double> ProductAxial::breakpoints() const {
  auto u = a_->breakpoints();
  auto v = b_->breakpoints();
  u.insert(u.end(), v.begin(), v.end());
  return u;
}

cplx ScaledArg::eval(double x, int m) const {
  return amp_ * std::pow(r_, m) * base_->eval(r_ * x, m);
}

void ScaledArg::eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const {
  std::vector<double> rx(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) rx[i] = r_ * xs[i];
  base_->eval_batch(rx, m, out);
  const cplx f = amp_ * std::pow(r_, m);
  for (auto& v : out) v *= f;
}

std::vector<double> ScaledArg::breakpoints() const {
  auto b = base_->breakpoints();
  for (auto& v : b) v /= r_;
  return b;
}

SumAxial::SumAxial(std::vector<cplx> c, std::vector<AxialPtr> f) : c_(std::move(c)), f_(std::move(f)) {
  if (c_.size() != f_.size()) fail(ErrorCode::InvalidArgument, "SumAxial size mismatch");
}

cplx SumAxial::eval(double x, int m) const {
  cplx s = 0.0;
  for (std::size_t i = 0; i < f_.size(); ++i) s += c_[i] * f_[i]->eval(x, m);
  return s;
}

void SumAxial::eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const {
  out.assign(xs.size(), 0.0);
  std::vector<cplx> tmp;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    f_[i]->eval_batch(xs, m, tmp);
    for (std::size_t j = 0; j < xs.size(); ++j) out[j] += c_[i] * tmp[j];
  }
}

int SumAxial::max_order() const {
  int m = kAnyOrder;
  for (const auto& f : f_) m = std::min(m, f->max_order());
  return m;
}

std::vector<double> SumAxial::breakpoints() const {
  std::vector<double> b;
  for (const auto& f : f_) {
    auto v = f->breakpoints();
    b.insert(b.end(), v.begin(), v.end());
  }
  return b;
}

double SumAxial::extent() const {
  double e = 0.0;
  for (const auto& f : f_) e = std::max(e, f->extent());
  return e;
}

double SumAxial::scale() const {
  double s = kInf;
  for (const auto& f : f_) s = std::min(s, f->scale());
  return std::isfinite(s) ? s : 1.0;
}

double SumAxial::support_lo() const {
  double s = kInf;
  for (const auto& f : f_) s = std::min(s, f->support_lo());
  return std::isfinite(s) ? s : 0.0;
}

double SumAxial::cost() const {
  double c = 0.0;
  for (const auto& f : f_) c += f->cost();
  return c;
}

// ---------------------------------------------------------------- Antiderivative

Antiderivative::Antiderivative(AxialPtr g) : g_(std::move(g)) {
  const double E = g_->extent();
  if (!std::isfinite(E)) fail(ErrorCode::InvalidArgument, "antiderivative needs a decaying integrand");
  auto panels = make_panels(0.0, E, g_->breakpoints(), 0.5 * g_->scale());
  const Rule& gl = gauss_legendre(16);
  nodes_.push_back(0.0);
  cum_.push_back(0.0);
  for (const auto& p : panels) {
    cplx s = 0.0;
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    for (std::size_t i = 0; i < gl.size(); ++i) s += h * gl.w[i] * g_->eval(c + h * gl.x[i], 0);
    nodes_.push_back(p.b);
    cum_.push_back(cum_.back() + s);
    mass_ += std::abs(s);
  }
  // zero-mean integrands give a compactly supported antiderivative
  extent_ = std::abs(cum_.back()) <= 1e-13 * mass_ ? E : kInf;
}

cplx Antiderivative::eval(double x, int m) const {
  if (m > 0) return g_->eval(x, m - 1);
  if (x <= 0.0) return 0.0;
  if (x >= nodes_.back()) return cum_.back();
  std::size_t i = std::upper_bound(nodes_.begin(), nodes_.end(), x) - nodes_.begin() - 1;
  const Rule& gl = gauss_legendre(16);
  const double a = nodes_[i], c = 0.5 * (a + x), h = 0.5 * (x - a);
  cplx s = 0.0;
  for (std::size_t j = 0; j < gl.size(); ++j) s += h * gl.w[j] * g_->eval(c + h * gl.x[j], 0);
  return cum_[i] + s;
}

// ---------------------------------------------------------------- Tabulated

namespace {
constexpr int kCheb = 24;

void cheb_fit(const std::vector<cplx>& v, std::vector<cplx>& coef) {
  static const std::vector<double> cosines = [] {
    std::vector<double> c(kCheb * kCheb);
    for (int k = 0; k < kCheb; ++k)
      for (int j = 0; j < kCheb; ++j) c[k * kCheb + j] = std::cos(M_PI * k * (j + 0.5) / kCheb);
    return c;
  }();
  const int n = kCheb;
  coef.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += v[j] * cosines[k * n + j];
    coef[k] = (k == 0 ? 1.0 : 2.0) * s / static_cast<double>(n);
  }
}

}  // namespace

Tabulated::Tabulated(AxialPtr src, int orders, double tol) : orders_(orders) {
  extent_ = src->extent();
  if (!std::isfinite(extent_)) fail(ErrorCode::InvalidArgument, "tabulation needs a finite extent");
  scale_ = src->scale();
  fine_extent_ = std::min(src->fine_extent(), extent_);
  coarse_scale_ = src->coarse_scale();
  std::vector<double> br = src->breakpoints();
  for (double b = 1.0; b > 1e-6; b *= 0.5) br.push_back(b);
  auto init = make_panels(0.0, fine_extent_, br, 2.0 * scale_);
  if (fine_extent_ < extent_) {
    auto outer = make_panels(fine_extent_, extent_, br, 2.0 * coarse_scale_);
    init.insert(init.end(), outer.begin(), outer.end());
  }
  std::vector<double> tx(kCheb);
  for (int j = 0; j < kCheb; ++j) tx[j] = std::cos(M_PI * (j + 0.5) / kCheb);
  for (int m = 0; m <= orders; ++m) {
    struct Piece {
      double a, b;
      std::vector<cplx> coef;
    };
    std::vector<Piece> out;
    std::vector<Interval> stack(init.rbegin(), init.rend());
    double mag = 0.0;
    std::vector<double> xs(kCheb);
    std::vector<cplx> v;
    // first pass magnitude estimate
    for (const auto& p : init) {
      for (int j = 0; j < kCheb; ++j) xs[j] = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * tx[j];
      src->eval_batch(xs, m, v);
      for (auto& z : v) mag = std::max(mag, std::abs(z));
    }
    const double thr = tol * std::max(mag, 1e-300);
    while (!stack.empty()) {
      Interval p = stack.back();
      stack.pop_back();
      for (int j = 0; j < kCheb; ++j) xs[j] = 0.5 * (p.a + p.b) + 0.5 * (p.b - p.a) * tx[j];
      src->eval_batch(xs, m, v);
      Piece pc{p.a, p.b, {}};
      cheb_fit(v, pc.coef);
      double tail = std::abs(pc.coef[kCheb - 1]) + std::abs(pc.coef[kCheb - 2]) +
                    std::abs(pc.coef[kCheb - 3]);
      if (tail > thr && (p.b - p.a) > 1e-9 * std::max(1.0, p.b)) {
        double mid = 0.5 * (p.a + p.b);
        stack.push_back({mid, p.b});
        stack.push_back({p.a, mid});
      } else {
        // drop trailing coefficients that together stay under a tenth of the threshold
        double dropped = 0.0;
        while (pc.coef.size() > 1 && dropped + std::abs(pc.coef.back()) <= 0.1 * thr) {
          dropped += std::abs(pc.coef.back());
          pc.coef.pop_back();
        }
        out.push_back(std::move(pc));
      }
    }
    std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) { return a.a < b.a; });
    Table tab;
    tab.off.push_back(0);
    for (const auto& pc : out) {
      tab.a.push_back(pc.a);
      tab.b.push_back(pc.b);
      for (const cplx& c : pc.coef) {
        tab.re.push_back(c.real());
        tab.im.push_back(c.imag());
      }
      tab.off.push_back(tab.re.size());
    }
    tables_.push_back(std::move(tab));
  }
}

cplx Tabulated::eval(double x, int m) const {
  if (m > orders_) fail(ErrorCode::InsufficientDerivatives, "tabulated order exceeded");
  const Table& t = tables_[m];
  if (x < 0.0 || x > extent_) return 0.0;
  std::size_t i = std::upper_bound(t.a.begin(), t.a.end(), x) - t.a.begin();
  if (i > 0) --i;
  const double s = std::clamp((2.0 * x - t.a[i] - t.b[i]) / (t.b[i] - t.a[i]), -1.0, 1.0);
  // Clenshaw on real and imaginary parts
  const double* re = t.re.data() + t.off[i];
  const double* im = t.im.data() + t.off[i];
  const std::size_t n = t.off[i + 1] - t.off[i];
  double r1 = 0, r2 = 0, i1 = 0, i2 = 0;
  for (std::size_t k = n; k-- > 1;) {
    const double r0 = 2.0 * s * r1 - r2 + re[k], i0 = 2.0 * s * i1 - i2 + im[k];
    r2 = r1;
    r1 = r0;
    i2 = i1;
    i1 = i0;
  }
  return {s * r1 - r2 + re[0], s * i1 - i2 + im[0]};
}

std::size_t Tabulated::pieces() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.a.size();
  return n;
}

// ---------------------------------------------------------------- helpers

AxialPtr exp_poly(std::vector<ExpTerm> t) { return std::make_shared<ExpPoly>(std::move(t)); }
AxialPtr exp_decay(double b, double coef) { return exp_poly({{coef, 0.0, b, 0.0}}); }
AxialPtr x_pow_exp(double a, double b, double coef) { return exp_poly({{coef, a, b, 0.0}}); }
AxialPtr x_pow_gauss(double a, double q, double coef) { return exp_poly({{coef, a, 0.0, q}}); }

AxialPtr zeta_cutoff() {
  // 1 - S(4(x-1/2)), S(s) = 35s^4 - 84s^5 + 70s^6 - 20s^7
  const double s[8] = {0, 0, 0, 0, 35, -84, 70, -20};
  Poly p;
  p.c.assign(8, 0.0);
  for (int j = 0; j < 8; ++j) p.c[j] = -s[j] * std::pow(4.0, j);
  p.c[0] += 1.0;
  return std::make_shared<PiecewisePoly>(std::vector<double>{0.5, 0.75}, std::vector<Poly>{p}, 1.0,
                                         0.0, 3);
}

AxialPtr bump(double center, double halfwidth, int power) {
  // (1-((x-c)/w)^2)^power in the centred variable x-c
  const double w = halfwidth;
  Poly base{{1.0, 0.0, -1.0 / (w * w)}};
  Poly p = Poly::pow(base, power);
  return std::make_shared<PiecewisePoly>(std::vector<double>{center - w, center + w},
                                         std::vector<Poly>{p}, 0.0, 0.0, power - 1,
                                         std::vector<double>{center});
}

AxialPtr deriv(const AxialPtr& f, int n) {
  if (n == 0) return f;
  return std::make_shared<DerivAxial>(f, n);
}

}  // namespace hsl
