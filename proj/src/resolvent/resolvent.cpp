#include "resolvent/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "core/errors.hpp"

namespace hsl {

namespace {

// k_n as an axial profile, for tabulation
class ProfileAxial final : public Axial {
 public:
  ProfileAxial(const KernelFamily* fam, int n) : fam_(fam), n_(n) {}
  cplx eval(double s, int r) const override { return fam_->raw(s, n_, r); }
  int max_order() const override { return 1; }
  std::vector<double> breakpoints() const override {
    std::vector<double> b;
    for (double s = fam_->near_scale(); s < fam_->reach(); s *= 2.0) b.push_back(s);
    return b;
  }
  double extent() const override { return fam_->reach(); }
  double scale() const override { return fam_->far_scale(); }
  // geometric breakpoints suffice past far_scale; Tabulated refines adaptively
  double fine_extent() const override { return std::min(fam_->far_scale(), fam_->reach()); }
  double coarse_scale() const override { return kInf; }

 private:
  const KernelFamily* fam_;
  int n_;
};

}  // namespace

cplx KernelFamily::profile(double s, int n, int r) const {
  if (n < 0 || n > std::min(max_n(), 2)) fail(ErrorCode::InsufficientDerivatives, "kernel order");
  if (direct_) return raw(s, n, r);
  std::call_once(once_[n], [&] { tables_[n] = std::make_shared<Tabulated>(std::make_shared<ProfileAxial>(this, n), 1); });
  return tables_[n]->eval(s, r);
}

// ---------------------------------------------------------------- ImageKernelAxial

ImageKernelAxial::ImageKernelAxial(AxialPtr f, FamilyPtr fam, Boundary bc, int n_nodes)
    : f_(std::move(f)), fam_(std::move(fam)), bc_(bc), n_(n_nodes) {
  const double E = f_->extent();
  if (!std::isfinite(E)) fail(ErrorCode::TailNotConverged, "resolvent input does not decay");
  if (f_->cost() >= 32.0) f_ = std::make_shared<Tabulated>(f_, std::min(f_->max_order(), 3));
  extent_ = E + fam_->reach();
  scale_ = std::min(f_->scale(), fam_->far_scale());
}

int ImageKernelAxial::max_order() const {
  return std::min(f_->max_order() + 2, 2 * std::min(fam_->max_n(), 2) + 1);
}

cplx ImageKernelAxial::eval(double x, int m) const {
  const int n = m / 2, r = m % 2;
  if (m > max_order()) fail(ErrorCode::InsufficientDerivatives, "image kernel derivative order");
  cplx local = 0.0;
  for (int i = 0; i < n; ++i) local += fam_->S(i) * f_->eval(x, 2 * (n - 1 - i) + r);

  const double R = fam_->reach();
  const double a = std::max(f_->support_lo(), x - R), b = std::min(f_->extent(), x + R);
  if (!(b > a)) return -local;
  std::vector<double> br = f_->breakpoints();
  br.push_back(x);
  const double ell = fam_->near_scale(), far = fam_->far_scale();
  for (double g = ell; g < far; g *= 2.0) {
    br.push_back(x - g);
    br.push_back(x + g);
    if (x < far) br.push_back(g - x);
  }
  std::vector<double> y, w;
  const double fe = f_->fine_extent();
  if (fe < b) {
    br.push_back(fe);
    std::vector<Interval> panels;
    for (const Interval& iv : make_panels(a, b, br, kInf)) {
      const double h = iv.b <= fe ? std::min(f_->scale(), far) : std::min(f_->coarse_scale(), far);
      auto sub = make_panels(iv.a, iv.b, {}, h);
      panels.insert(panels.end(), sub.begin(), sub.end());
    }
    panel_nodes(panels, n_, y, w);
  } else {
    panel_nodes(make_panels(a, b, br, std::min(f_->scale(), far)), n_, y, w);
  }
  std::vector<cplx> fv;
  f_->eval_batch(y, 0, fv);
  const double sgn_img = bc_ == Boundary::dirichlet ? -1.0 : 1.0;
  cplx acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = x - y[i];
    cplx k = fam_->profile(std::abs(d), n, r);
    if (r == 1 && d < 0) k = -k;
    k += sgn_img * fam_->profile(x + y[i], n, r);
    acc += w[i] * k * fv[i];
  }
  return acc - local;
}

// ---------------------------------------------------------------- LaplaceFamily

LaplaceFamily::LaplaceFamily(cplx mu, const LaplaceOptions& opt) : mu_(mu), opt_(opt) {
  if (mu.imag() == 0.0 && mu.real() <= 0.0) fail(ErrorCode::BranchCut, "resolvent point on the spectrum");
  delta_ = -0.5 * std::arg(mu);
  reach_ = 46.0 / std::sqrt(mu).real();
  const double tan_d = std::abs(std::tan(delta_));
  const double panel = opt.panel > 0 ? opt.panel : std::min(1.0, 0.25 / std::max(tan_d, 1e-3));
  const double rate = (mu * std::polar(1.0, delta_)).real();
  nodes_ = build(panel, opt.decay / rate);
  if (opt.check) {
    const auto fine = build(0.5 * panel, 1.5 * opt.decay / rate);
    const double ell = near_scale();
    double diff = 0.0, mag = 0.0;
    for (double s : {0.0, 0.25 * ell, ell, 4.0 * ell, 16.0 * ell})
      for (int r : {0, 1}) {
        const cplx a = sum(nodes_, s, r), b = sum(fine, s, r);
        diff = std::max(diff, std::abs(a - b));
        mag = std::max(mag, std::abs(a));
      }
    if (diff > opt.check_tol * mag)
      fail(ErrorCode::ContourNotConverged, "Laplace quadrature changed under refinement");
  }
}

std::vector<LaplaceFamily::Node> LaplaceFamily::build(double panel, double tmax) const {
  std::vector<Node> nodes;
  const cplx rot = std::polar(1.0, delta_);
  const double tmin = 1e-30 * (1.0 + 1.0 / std::abs(mu_));
  const double v0 = std::log(tmin), v1 = std::log(tmax);
  const int np = std::max(1, static_cast<int>(std::ceil((v1 - v0) / panel)));
  const double h = (v1 - v0) / np;
  const Rule& gl = gauss_legendre(opt_.nodes);
  for (int p = 0; p < np; ++p)
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double v = v0 + h * (p + 0.5 * (gl.x[j] + 1.0));
      const double tau = std::exp(v);
      const cplx z = tau * rot;
      Node nd;
      nd.tau = tau;
      nd.a = -mu_ * z;
      nd.b = -1.0 / (4.0 * z);
      nd.c = 0.5 * h * gl.w[j] * tau * rot / std::sqrt(4.0 * M_PI * z);
      nodes.push_back(nd);
    }
  return nodes;
}

cplx LaplaceFamily::sum(const std::vector<Node>& nodes, double s, int r) const {
  // nodes with s²cosδ/(4τ) > 40 contribute below e^{-40}
  const double tlo = s * s * std::cos(delta_) / 160.0;
  auto it = std::lower_bound(nodes.begin(), nodes.end(), tlo,
                             [](const Node& n, double t) { return n.tau < t; });
  cplx acc = 0.0;
  const double s2 = s * s;
  for (; it != nodes.end(); ++it) {
    cplx t = it->c * std::exp(it->a + s2 * it->b);
    if (r == 1) t *= 2.0 * s * it->b;
    acc += t;
  }
  return acc;
}

cplx LaplaceFamily::raw(double s, int n, int r) const { return std::pow(mu_, n) * sum(nodes_, s, r); }

// ---------------------------------------------------------------- plane waves

Tangential1D plane_wave_expansion(const Tangential1D& g, double L) {
  Tangential1D out;
  out.waves = g.waves;
  out.window = L;
  if (g.hermite.empty()) return out;
  const double de = M_PI / L;
  double emax = 0.0;
  for (const auto& a : g.hermite) {
    const double rw = a.width.real();
    if (rw <= 0) fail(ErrorCode::TailNotConverged, "tangential factor does not decay");
    emax = std::max(emax, std::sqrt((34.0 + 2.0 * a.order) / rw));
  }
  const int K = static_cast<int>(std::ceil(emax / de));
  for (int k = -K; k <= K; ++k) {
    const double eta = k * de;
    cplx c = 0.0;
    for (const auto& a : g.hermite) c += a.coef * std::pow(cplx(0.0, eta), a.order) * std::exp(-a.width * eta * eta);
    if (c != 0.0) out.waves.push_back({c * de / (2.0 * M_PI), eta});
  }
  return out;
}

namespace {

// families (and their lazily built tables) are shared between resolvent calls
std::shared_ptr<LaplaceFamily> shared_family(cplx mu, const LaplaceOptions& opt) {
  using Key = std::tuple<double, double, double, int, double, double, bool>;
  static std::mutex mtx;
  static std::map<Key, std::shared_ptr<LaplaceFamily>> cache;
  const Key key{mu.real(), mu.imag(), opt.panel, opt.nodes, opt.decay, opt.check_tol, opt.check};
  std::lock_guard<std::mutex> lock(mtx);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() >= 4096) cache.clear();
  auto fam = std::make_shared<LaplaceFamily>(mu, opt);
  cache.emplace(key, fam);
  return fam;
}

// one image-kernel object per (input, family, bc) while the input lives, so
// Field::eval_grid can share its values across terms
AxialPtr shared_image(const AxialPtr& f, const FamilyPtr& fam, Boundary bc) {
  struct Entry {
    std::weak_ptr<const Axial> src, img;
  };
  using Key = std::tuple<const Axial*, const KernelFamily*, int>;
  static std::mutex mtx;
  static std::map<Key, Entry> cache;
  const Key key{f.get(), fam.get(), static_cast<int>(bc)};
  std::lock_guard<std::mutex> lock(mtx);
  if (auto it = cache.find(key); it != cache.end()) {
    if (auto img = it->second.img.lock(); img && !it->second.src.expired()) return img;
  }
  if (cache.size() >= 65536)
    std::erase_if(cache, [](const auto& kv) { return kv.second.img.expired() || kv.second.src.expired(); });
  AxialPtr img = std::make_shared<ImageKernelAxial>(f, fam, bc);
  cache[key] = {f, img};
  return img;
}

}  // namespace

Field resolvent_laplace(Boundary bc, cplx lambda, const Field& f, const LaplaceOptions& opt) {
  const int d = f.dim();
  if (d == 1) {
    auto fam = shared_family(lambda, opt);
    std::vector<Term> out;
    for (const auto& t : f.terms())
      out.push_back({t.coef, shared_image(t.axial, fam, bc), {}});
    return Field(1, std::move(out));
  }
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0) fail(ErrorCode::BranchCut, "resolvent point on the spectrum");
  const double spread = 30.0 / std::sqrt(lambda).real();
  std::map<long long, std::shared_ptr<LaplaceFamily>> fams;
  auto family = [&](double eta2) {
    const long long key = std::llround(eta2 * 1e9);
    auto it = fams.find(key);
    if (it == fams.end()) it = fams.emplace(key, shared_family(lambda + eta2, opt)).first;
    return it->second;
  };
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    std::vector<Tangential1D> pw;
    for (const auto& g : t.tang) pw.push_back(plane_wave_expansion(g, g.extent() + spread));
    if (d == 2) {
      // ±η share the axial solve
      std::map<long long, Tangential1D> groups;
      std::map<long long, double> eta2;
      for (const auto& w : pw[0].waves) {
        const long long key = std::llround(std::abs(w.eta) * 1e9);
        auto& grp = groups[key];
        grp.window = pw[0].window;
        grp.waves.push_back(w);
        eta2[key] = w.eta * w.eta;
      }
      for (auto& [key, grp] : groups)
        out.push_back({t.coef, shared_image(t.axial, family(eta2[key]), bc), {grp}});
    } else {
      for (const auto& w1 : pw[0].waves)
        for (const auto& w2 : pw[1].waves) {
          Tangential1D a, b;
          a.window = pw[0].window;
          b.window = pw[1].window;
          a.waves.push_back(w1);
          b.waves.push_back(w2);
          out.push_back({t.coef,
                         shared_image(t.axial, family(w1.eta * w1.eta + w2.eta * w2.eta), bc),
                         {a, b}});
        }
    }
  }
  return Field(d, std::move(out));
}

double resolvent_residual(cplx lambda, const Field& u, const Field& f, double p, double gamma,
                          const QuadratureSpec& q) {
  if (u.dim() != 1 || f.dim() != 1) fail(ErrorCode::InvalidArgument, "residual check is one-dimensional");
  auto upp = [&](double x) {
    const double h = std::min(1e-3, 0.25 * x);
    auto d2 = [&](double hh) { return (u.eval(x + hh, 1) - u.eval(x - hh, 1)) / (2.0 * hh); };
    return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
  };
  BatchReal F = [&](const std::vector<double>& xs, std::vector<double>& out) {
    out.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      out[i] = x > 0 ? std::pow(std::abs(lambda * u.eval(x) - upp(x) - f.eval(x)), p) : 0.0;
    }
  };
  HalfLineProblem prob;
  prob.weight_exp = gamma;
  prob.breaks = u.breakpoints();
  prob.extent = u.extent();
  prob.scale = u.scale();
  prob.zones = u.scale_zones();
  prob.check_tail = false;
  return std::pow(integrate_halfline(F, prob, q).value, 1.0 / p);
}

}  // namespace hsl
