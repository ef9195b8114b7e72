#include "resolvent/hinf.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "kernels/growth.hpp"

namespace hsl {

HolomorphicSymbol HolomorphicSymbol::scaled(cplx c) const {
  HolomorphicSymbol s = *this;
  auto f = phi;
  s.phi = [f, c](cplx z) { return c * f(z); };
  s.at_infinity *= c;
  s.name = name + "*" + std::to_string(c.real());
  return s;
}

HolomorphicSymbol symbol_rational(double a) {
  return {"az/(1+az)^2,a=" + std::to_string(a),
          [a](cplx z) { return a * z / ((1.0 + a * z) * (1.0 + a * z)); }, M_PI / 8, SymbolDecay::algebraic, 0.0};
}

HolomorphicSymbol symbol_z_exp() {
  return {"z e^-z", [](cplx z) { return z * std::exp(-z); }, M_PI / 8, SymbolDecay::exponential, 0.0};
}

HolomorphicSymbol symbol_exp_difference() {
  return {"e^-z - e^-2z", [](cplx z) { return std::exp(-z) - std::exp(-2.0 * z); }, M_PI / 8,
          SymbolDecay::exponential, 0.0};
}

HolomorphicSymbol symbol_constant(cplx c) {
  return {"const", [c](cplx) { return c; }, M_PI / 2, SymbolDecay::bounded, c};
}

double hinf_norm_estimate(const HolomorphicSymbol& phi, double omega) {
  double m = std::abs(phi.at_infinity);
  for (int a = -16; a <= 16; ++a) {
    const double th = omega * a / 16.0;
    for (int i = 0; i <= 640; ++i) {
      const double r = std::pow(10.0, -8.0 + i * 16.0 / 640.0);
      const double v = std::abs(phi(std::polar(r, th)));
      if (std::isfinite(v)) m = std::max(m, v);
    }
  }
  return m;
}

void ContourSpec::validate() const {
  if (!(nu > 0 && nu < M_PI / 2)) fail(ErrorCode::InvalidArgument, "contour angle must lie in (0, pi/2)");
  if (arc_radius < 0 || r_max < 0 || n_ray < 0 || n_arc < 2) fail(ErrorCode::InvalidArgument, "contour spec");
}

std::vector<ContourNode> contour_nodes(const ContourSpec& c, double r_max, double delta) {
  std::vector<ContourNode> out;
  const double u0 = std::log(delta), u1 = std::log(r_max);
  const Rule& gl = gauss_legendre(16);
  int np;
  if (c.n_ray > 0) {
    np = std::max(1, c.n_ray / 16);
  } else {
    // phase of e^{-√μ s} per 16-point panel stays below ~20 rad where its modulus exceeds e^{-40}
    const double du = std::min(1.0, std::tan(0.5 * c.nu));
    np = std::max(1, static_cast<int>(std::ceil((u1 - u0) / du)));
  }
  const double h = (u1 - u0) / np;
  const cplx up = std::polar(1.0, c.nu), lo = std::polar(1.0, -c.nu);
  // upper ray, inward
  for (int p = np - 1; p >= 0; --p)
    for (int j = static_cast<int>(gl.size()) - 1; j >= 0; --j) {
      const double u = u0 + h * (p + 0.5 * (gl.x[j] + 1.0));
      const double r = std::exp(u);
      out.push_back({r * up, -0.5 * h * gl.w[j] * r * up});
    }
  // arc, clockwise through the positive axis
  const Rule& ga = gauss_legendre(std::min(c.n_arc, 64));
  const int na = std::max(1, c.n_arc / static_cast<int>(ga.size()));
  for (int p = 0; p < na; ++p)
    for (std::size_t j = 0; j < ga.size(); ++j) {
      const double t = (p + 0.5 * (ga.x[j] + 1.0)) / na;
      const double th = c.nu - 2.0 * c.nu * t;
      const cplx z = std::polar(delta, th);
      out.push_back({z, cplx(0.0, 1.0) * z * (-2.0 * c.nu) * (0.5 * ga.w[j] / na)});
    }
  // lower ray, outward
  for (int p = 0; p < np; ++p)
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double u = u0 + h * (p + 0.5 * (gl.x[j] + 1.0));
      const double r = std::exp(u);
      out.push_back({r * lo, 0.5 * h * gl.w[j] * r * lo});
    }
  return out;
}

// ---------------------------------------------------------------- ContourFamily

ContourFamily::ContourFamily(std::vector<cplx> coef, std::vector<cplx> mu) : c_(std::move(coef)), mu_(std::move(mu)) {
  double remin = kInf, amax = 0.0;
  for (std::size_t j = 0; j < mu_.size(); ++j) {
    sq_.push_back(std::sqrt(mu_[j]));
    remin = std::min(remin, sq_.back().real());
    amax = std::max(amax, std::abs(sq_.back()));
  }
  for (int i = 0; i < 3; ++i) {
    KahanSum<cplx> k;
    for (std::size_t j = 0; j < mu_.size(); ++j) k.add(c_[j] * std::pow(mu_[j], i));
    S_[i] = k.sum;
  }
  reach_ = 46.0 / remin;
  near_ = 1.0 / amax;
  far_ = std::max(near_, 1.0);
}

cplx ContourFamily::raw(double s, int n, int r) const {
  KahanSum<cplx> acc;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    const cplx q = sq_[j];
    if (q.real() * s > 45.0) continue;
    cplx g = std::exp(-q * s);
    g = r == 0 ? g / (2.0 * q) : -0.5 * g;
    for (int i = 0; i < n; ++i) g *= mu_[j];
    acc.add(c_[j] * g);
  }
  return acc.sum;
}

// ---------------------------------------------------------------- hinf_apply

namespace {

double auto_r_max(const HolomorphicSymbol& phi, const ContourSpec& c) {
  if (c.r_max > 0) return c.r_max;
  if (phi.decay != SymbolDecay::exponential) return 1e6;
  double peak = 0.0;
  for (double r = 1e-3; r < 1e3; r *= 1.1)
    for (double s : {1.0, -1.0}) peak = std::max(peak, std::abs(phi(std::polar(r, s * c.nu))));
  for (double r = 1.0; r < 1e8; r *= 1.25) {
    bool small = true;
    for (double t = r; t < 4.0 * r; t *= 1.1)
      for (double s : {1.0, -1.0})
        if (std::abs(phi(std::polar(t, s * c.nu))) * 1e17 > peak) small = false;
    if (small) return r;
  }
  fail(ErrorCode::ContourNotConverged, "symbol declared exponential does not decay on the contour");
}

// (1/2πi) ∫ over both rays beyond r_max of φ(z) z^{-n-1} dz
cplx tail_coefficient(const std::function<cplx(cplx)>& phi, double nu, double r_max, int n) {
  const Rule& gl = gauss_legendre(16);
  KahanSum<cplx> acc;
  const double u1 = std::log(r_max);
  for (int p = 0; p < 60; ++p)
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double u = u1 + p + 0.5 * (gl.x[j] + 1.0);
      const double r = std::exp(u);
      const cplx zu = std::polar(r, nu), zl = std::polar(r, -nu);
      const cplx vu = -phi(zu) * std::pow(zu, -n - 1) * zu;
      const cplx vl = phi(zl) * std::pow(zl, -n - 1) * zl;
      acc.add(0.5 * gl.w[j] * (vu + vl));
    }
  return acc.sum / cplx(0.0, 2.0 * M_PI);
}

// boundary layer of the tail: (1/2πi) ∫ φ(z) z^{-1} μ^{-k/2} e^{-√μ x} dz over the tail rays, μ = λ_shift - z
class TailLayerAxial final : public Axial {
 public:
  TailLayerAxial(const std::function<cplx(cplx)>& phi, double nu, double r_max, double lambda_shift, int k) {
    const Rule& gl = gauss_legendre(16);
    const double u1 = std::log(r_max);
    for (int p = 0; p < 60; ++p)
      for (std::size_t j = 0; j < gl.size(); ++j) {
        const double u = u1 + p + 0.5 * (gl.x[j] + 1.0);
        const double r = std::exp(u);
        for (double sg : {1.0, -1.0}) {
          const cplx z = std::polar(r, sg * nu);
          const cplx q = std::sqrt(lambda_shift - z);
          c_.push_back(sg * -1.0 * 0.5 * gl.w[j] * phi(z) * std::pow(q, -k) / cplx(0.0, 2.0 * M_PI));
          q_.push_back(q);
        }
      }
    double remin = kInf;
    for (auto q : q_) remin = std::min(remin, q.real());
    extent_ = 45.0 / remin;
    scale_ = 1.0 / std::sqrt(r_max);
  }
  cplx eval(double x, int m) const override {
    KahanSum<cplx> acc;
    for (std::size_t j = 0; j < c_.size(); ++j)
      if (q_[j].real() * x < 45.0) acc.add(c_[j] * std::pow(-q_[j], m) * std::exp(-q_[j] * x));
    return acc.sum;
  }
  double extent() const override { return extent_; }
  double scale() const override { return scale_; }

 private:
  std::vector<cplx> c_, q_;
  double extent_, scale_;
};

Field contour_part(Boundary bc, const std::function<cplx(cplx)>& phi, SymbolDecay decay, const ContourSpec& c,
                   double r_max, double delta, double lambda_shift, const Field& f, bool direct = false) {
  const auto nodes = contour_nodes(c, r_max, delta);
  std::vector<cplx> coef, mu;
  for (const auto& nd : nodes) {
    const cplx v = phi(nd.z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e8)
      fail(ErrorCode::SymbolUnboundedOnContour, "symbol is unbounded on the contour");
    // R(z, A) = -(μ - Δ)^{-1}, μ = λ_shift - z
    coef.push_back(-v * nd.dz / cplx(0.0, 2.0 * M_PI));
    mu.push_back(lambda_shift - nd.z);
  }
  auto fam = std::make_shared<ContourFamily>(std::move(coef), std::move(mu));
  fam->set_direct(direct);
  std::vector<Term> out;
  for (const auto& t : f.terms()) out.push_back({t.coef, std::make_shared<ImageKernelAxial>(t.axial, fam, bc), {}});
  Field u(1, std::move(out));
  if (decay != SymbolDecay::exponential) {
    Field An = f;
    const int nt = f.k_max() >= 2 ? 2 : 1;
    for (int n = 0; n < nt; ++n) {
      u = u + An.scaled(tail_coefficient(phi, c.nu, r_max, n));
      if (n + 1 < nt) An = An.scaled(lambda_shift) - An.laplacian();
    }
    // near the boundary R(z,A)f ≈ (f - f(0) e^{-√μ x})/z (Dirichlet), (f + f'(0) μ^{-1/2} e^{-√μ x})/z (Neumann)
    const bool dir = bc == Boundary::dirichlet;
    const cplx b0 = dir ? -f.eval(0.0, 0) : f.eval(0.0, 1);
    if (b0 != 0.0)
      u = u + Field::axial(std::make_shared<TailLayerAxial>(phi, c.nu, r_max, lambda_shift, dir ? 0 : 1), b0);
  }
  return u;
}

}  // namespace

Field hinf_apply(Boundary bc, const HolomorphicSymbol& phi, const ContourSpec& contour, double lambda_shift,
                 const Field& f) {
  contour.validate();
  if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "the contour calculus is one-dimensional");
  if (!(lambda_shift > 0)) fail(ErrorCode::HypothesisViolated, "the arc contour needs lambda_shift > 0");
  if (!(contour.nu < phi.omega)) fail(ErrorCode::InvalidArgument, "contour angle must be below the symbol angle");
  const double delta = contour.arc_radius > 0 ? contour.arc_radius : 0.5 * lambda_shift;
  if (!(delta < lambda_shift)) fail(ErrorCode::HypothesisViolated, "B(0, delta) must avoid the spectrum");

  std::function<cplx(cplx)> g = phi.phi;
  SymbolDecay decay = phi.decay;
  const cplx c_inf = phi.decay == SymbolDecay::bounded ? phi.at_infinity : cplx(0.0);
  if (phi.decay == SymbolDecay::bounded) {
    g = [p = phi.phi, c_inf](cplx z) { return p(z) - c_inf; };
    decay = SymbolDecay::algebraic;
  }
  const double r_max = auto_r_max(phi, contour);
  Field u = contour_part(bc, g, decay, contour, r_max, delta, lambda_shift, f);
  if (contour.check) {
    ContourSpec fine = contour;
    fine.n_arc = 2 * contour.n_arc;
    const auto base_nodes = contour_nodes(contour, r_max, delta).size();
    fine.n_ray = static_cast<int>(base_nodes - contour.n_arc);  // twice the per-ray count
    const Field v = contour_part(bc, g, decay, fine, 4.0 * r_max, delta, lambda_shift, f, true);
    const double E = std::min(f.extent(), 10.0);
    double diff = 0.0, mag = 0.0;
    for (double x : {0.1 * E, 0.37 * E, 0.8 * E}) {
      const cplx vx = v.eval(x);
      diff = std::max(diff, std::abs(u.eval(x) - vx));
      mag = std::max(mag, std::abs(vx));
    }
    if (diff > contour.check_tol * std::max(mag, 1e-300))
      fail(ErrorCode::ContourNotConverged, "contour value changed under node doubling");
  }
  if (c_inf != 0.0) u = u + f.scaled(c_inf);
  return u;
}

HinfProbeResult hinf_bound_probe(Boundary bc, const SpaceParams& sp, const std::vector<HolomorphicSymbol>& symbols,
                                 const std::vector<Field>& battery, double lambda_shift, const ContourSpec& contour,
                                 const QuadratureSpec& q) {
  HinfProbeResult res;
  for (const auto& s : symbols) {
    const double hn = hinf_norm_estimate(s, s.omega);
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const Field u = hinf_apply(bc, s, contour, lambda_shift, battery[i]);
      const double r = semigroup_space_norm(bc, u, sp, q) / (hn * semigroup_space_norm(bc, battery[i], sp, q));
      res.entries.push_back({s.name, i, hn, r});
      res.max_ratio = std::max(res.max_ratio, r);
    }
  }
  return res;
}

}  // namespace hsl
