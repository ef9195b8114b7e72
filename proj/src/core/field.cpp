#include "core/field.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/errors.hpp"

namespace hsl {

namespace {

cplx hermite_atom(const HermiteAtom& a, double x, int extra) {
  const int n = a.order + extra;
  const cplx s4 = 4.0 * a.width;
  const cplx rs = std::sqrt(s4);
  const cplx u = x / rs;
  cplx h0 = 1.0, h1 = 2.0 * u;
  cplx hn = n == 0 ? h0 : h1;
  for (int k = 1; k < n; ++k) {
    cplx h2 = 2.0 * u * h1 - 2.0 * static_cast<double>(k) * h0;
    h0 = h1;
    h1 = h2;
    hn = h2;
  }
  const cplx g = std::exp(-u * u) / std::sqrt(M_PI * s4);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return a.coef * g * sign * hn * std::pow(rs, -n);
}

}  // namespace

cplx Tangential1D::eval(double x, int m) const {
  cplx s = 0.0;
  for (const auto& a : hermite) s += hermite_atom(a, x, m);
  for (const auto& w : waves) s += w.coef * std::pow(cplx(0.0, w.eta), m) * std::exp(cplx(0.0, w.eta * x));
  return s;
}

Tangential1D Tangential1D::derivative(int n) const {
  Tangential1D t = *this;
  for (auto& a : t.hermite) a.order += n;
  for (auto& w : t.waves) w.coef *= std::pow(cplx(0.0, w.eta), n);
  return t;
}

Tangential1D Tangential1D::heat(cplx z) const {
  Tangential1D t = *this;
  for (auto& a : t.hermite) a.width += z;
  for (auto& w : t.waves) w.coef *= std::exp(-w.eta * w.eta * z);
  return t;
}

double Tangential1D::extent() const {
  double e = 0.0;
  for (const auto& a : hermite) {
    const double r = (1.0 / (4.0 * a.width)).real();
    if (r <= 0) return kInf;
    e = std::max(e, 1.2 * std::sqrt(50.0 / r) + a.order);
  }
  if (!waves.empty()) e = std::max(e, window);
  return e;
}

double Tangential1D::scale() const {
  double s = kInf;
  for (const auto& a : hermite)
    s = std::min(s, std::sqrt(std::abs(a.width)) * std::cos(std::arg(a.width)) / std::sqrt(1.0 + a.order));
  double emax = 0.0;
  for (const auto& w : waves) emax = std::max(emax, std::abs(w.eta));
  if (emax > 0) s = std::min(s, 1.0 / emax);
  return std::isfinite(s) ? s : 1.0;
}

Tangential1D Tangential1D::gaussian(double s, cplx coef, int order) {
  Tangential1D t;
  t.hermite.push_back({coef, order, s});
  return t;
}

Field::Field(int d, std::vector<Term> terms) : d_(d), terms_(std::move(terms)) {
  if (d < 1 || d > 3) fail(ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
  for (const auto& t : terms_)
    if (static_cast<int>(t.tang.size()) != d - 1)
      fail(ErrorCode::InvalidArgument, "term tangential rank mismatch");
}

Field Field::axial(AxialPtr a, cplx coef) { return Field(1, {Term{coef, std::move(a), {}}}); }

Field Field::separable(AxialPtr a, std::vector<Tangential1D> tang, cplx coef) {
  const int d = static_cast<int>(tang.size()) + 1;
  return Field(d, {Term{coef, std::move(a), std::move(tang)}});
}

int Field::k_max() const {
  int k = kAnyOrder;
  for (const auto& t : terms_) k = std::min(k, t.axial->max_order());
  return k;
}

cplx Field::eval(double x1, const std::vector<double>& xt, const MultiIndex& alpha) const {
  if (static_cast<int>(xt.size()) < d_ - 1) fail(ErrorCode::InvalidArgument, "point rank mismatch");
  cplx s = 0.0;
  for (const auto& t : terms_) {
    cplx v = t.coef * t.axial->eval(x1, alpha[0]);
    for (int j = 0; j + 1 < d_; ++j) v *= t.tang[j].eval(xt[j], alpha[j + 1]);
    s += v;
  }
  return s;
}

Field Field::derivative(const MultiIndex& alpha) const {
  if (alpha[0] > k_max())
    fail(ErrorCode::InsufficientDerivatives,
         "axial order " + std::to_string(alpha[0]) + " exceeds k_max " + std::to_string(k_max()));
  Field f(d_);
  for (const auto& t : terms_) {
    Term n{t.coef, deriv(t.axial, alpha[0]), t.tang};
    for (int j = 0; j + 1 < d_; ++j) n.tang[j] = t.tang[j].derivative(alpha[j + 1]);
    f.terms_.push_back(std::move(n));
  }
  return f;
}

Field Field::laplacian() const {
  Field f(d_);
  for (int j = 0; j < d_; ++j) {
    MultiIndex a{0, 0, 0};
    a[j] = 2;
    f = f + derivative(a);
  }
  return f;
}

Field Field::scaled(cplx c) const {
  Field f = *this;
  if (c == cplx(0.0)) {
    f.terms_.clear();
    return f;
  }
  for (auto& t : f.terms_) t.coef *= c;
  return f;
}

Field Field::operator+(const Field& o) const {
  if (o.d_ != d_) fail(ErrorCode::InvalidArgument, "dimension mismatch in field sum");
  Field f = *this;
  f.terms_.insert(f.terms_.end(), o.terms_.begin(), o.terms_.end());
  return f;
}

Field Field::operator-(const Field& o) const { return *this + o.scaled(-1.0); }

Field Field::multiply_axial(const AxialPtr& a) const {
  Field f = *this;
  for (auto& t : f.terms_) t.axial = std::make_shared<ProductAxial>(t.axial, a);
  return f;
}

std::vector<double> Field::breakpoints() const {
  std::vector<double> b;
  for (const auto& t : terms_) {
    auto v = t.axial->breakpoints();
    b.insert(b.end(), v.begin(), v.end());
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double Field::extent() const {
  double e = 0.0;
  for (const auto& t : terms_) e = std::max(e, t.axial->extent());
  return e;
}

double Field::scale() const {
  double s = kInf;
  for (const auto& t : terms_) s = std::min(s, t.axial->scale());
  return std::isfinite(s) ? s : 1.0;
}

std::vector<std::pair<double, double>> Field::scale_zones() const {
  std::vector<std::pair<double, double>> z;
  for (const auto& t : terms_)
    if (std::isfinite(t.axial->scale())) {
      z.emplace_back(std::min(t.axial->fine_extent(), t.axial->extent()), t.axial->scale());
      z.emplace_back(t.axial->extent(), t.axial->coarse_scale());
    }
  return z;
}

double Field::tangential_extent(int j) const {
  double e = 0.0;
  for (const auto& t : terms_) e = std::max(e, t.tang[j].extent());
  return e;
}

double Field::tangential_scale(int j) const {
  double s = kInf;
  for (const auto& t : terms_) s = std::min(s, t.tang[j].scale());
  return std::isfinite(s) ? s : 1.0;
}

void Field::eval_grid(const std::vector<double>& x1, const std::vector<std::vector<double>>& xt,
                      const MultiIndex& alpha, std::vector<cplx>& out) const {
  std::size_t tsize = 1;
  for (int j = 0; j + 1 < d_; ++j) tsize *= xt[j].size();
  const std::size_t n1 = x1.size();
  out.assign(n1 * tsize, 0.0);
  std::vector<cplx> tv(tsize);
  // terms sharing an axial factor (e.g. a difference of resolvents) evaluate it once
  std::unordered_map<const Axial*, std::vector<cplx>> seen;
  for (const auto& t : terms_) {
    auto [slot, fresh] = seen.try_emplace(t.axial.get());
    if (fresh) t.axial->eval_batch(x1, alpha[0], slot->second);
    const std::vector<cplx>& av = slot->second;
    if (d_ == 1) {
      for (std::size_t i = 0; i < n1; ++i) out[i] += t.coef * av[i];
      continue;
    }
    // tangential tensor values
    std::vector<cplx> t2(xt[0].size());
    for (std::size_t j = 0; j < xt[0].size(); ++j) t2[j] = t.tang[0].eval(xt[0][j], alpha[1]);
    if (d_ == 2) {
      tv = t2;
    } else {
      std::vector<cplx> t3(xt[1].size());
      for (std::size_t j = 0; j < xt[1].size(); ++j) t3[j] = t.tang[1].eval(xt[1][j], alpha[2]);
      for (std::size_t a = 0; a < t2.size(); ++a)
        for (std::size_t b = 0; b < t3.size(); ++b) tv[a * t3.size() + b] = t2[a] * t3[b];
    }
    for (std::size_t i = 0; i < n1; ++i) {
      const cplx ai = t.coef * av[i];
      if (ai == cplx(0.0)) continue;
      cplx* row = &out[i * tsize];
      for (std::size_t j = 0; j < tsize; ++j) row[j] += ai * tv[j];
    }
  }
}

std::vector<MultiIndex> multi_indices(int d, int n) {
  std::vector<MultiIndex> out;
  if (d == 1) return {{n, 0, 0}};
  for (int a = n; a >= 0; --a) {
    if (d == 2) {
      out.push_back({a, n - a, 0});
      continue;
    }
    for (int b = n - a; b >= 0; --b) out.push_back({a, b, n - a - b});
  }
  return out;
}

}  // namespace hsl
