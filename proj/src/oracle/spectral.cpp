#include "oracle/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace hsl {

TransformMode mode_for(Boundary bc) {
  return bc == Boundary::dirichlet ? TransformMode::sine : TransformMode::cosine;
}

namespace {

bool closed_form_term(const ExpTerm& t) {
  return t.q == cplx(0.0) && t.a >= 0 && t.a <= 40 && t.a == std::round(t.a) && t.b.real() > 0;
}

// ∫_0^∞ x^n e^{-bx} (sin|cos)(ξx) dx from n!/(b ∓ iξ)^{n+1}
cplx closed_form(const ExpTerm& t, TransformMode mode, double xi) {
  const int n = static_cast<int>(t.a);
  const double fact = std::tgamma(n + 1.0);
  const cplx ip = fact / std::pow(t.b - cplx(0, xi), n + 1);
  const cplx im = fact / std::pow(t.b + cplx(0, xi), n + 1);
  return t.c * (mode == TransformMode::sine ? (ip - im) / cplx(0, 2) : 0.5 * (ip + im));
}

void numeric_forward(const Axial& f, TransformMode mode, const std::vector<double>& xi,
                     std::vector<cplx>& out) {
  const double E = f.extent();
  if (!std::isfinite(E)) fail(ErrorCode::TailNotConverged, "transform input does not decay");
  const double lo = f.support_lo();
  if (E <= lo) return;
  double xmax = 1.0;
  for (double v : xi) xmax = std::max(xmax, std::abs(v));
  const double h = std::min(f.scale(), M_PI / xmax);
  std::vector<double> x, w;
  auto panels = make_panels(lo, E, f.breakpoints(), h);
  // geometric cells toward the boundary for profiles with a rough onset
  if (lo == 0.0 && !panels.empty()) {
    const double a = panels.front().b;
    panels.erase(panels.begin());
    std::vector<Interval> g;
    for (double b = a; b > a * 1e-12; b *= 0.5) g.push_back({0.5 * b, b});
    g.push_back({0.0, g.back().a});
    panels.insert(panels.begin(), g.rbegin(), g.rend());
  }
  panel_nodes(panels, 16, x, w);
  std::vector<cplx> fv;
  f.eval_batch(x, 0, fv);
  for (std::size_t j = 0; j < xi.size(); ++j) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += w[i] * fv[i] * (mode == TransformMode::sine ? std::sin(xi[j] * x[i]) : std::cos(xi[j] * x[i]));
    out[j] += s;
  }
}

void forward(const AxialPtr& f, TransformMode mode, const std::vector<double>& xi, std::vector<cplx>& out) {
  out.assign(xi.size(), 0.0);
  if (auto ep = std::dynamic_pointer_cast<const ExpPoly>(f)) {
    std::vector<ExpTerm> rest;
    for (const auto& t : ep->terms()) {
      if (!closed_form_term(t)) {
        rest.push_back(t);
        continue;
      }
      for (std::size_t j = 0; j < xi.size(); ++j) out[j] += closed_form(t, mode, xi[j]);
    }
    if (!rest.empty()) numeric_forward(ExpPoly(rest), mode, xi, out);
    return;
  }
  numeric_forward(*f, mode, xi, out);
}

struct Mass {
  double weighted = 0, peak = 0;  // Σ w ξ^m |g| and max |g|
};

template <class G>
Mass mass(const G& g, double a, double b, double h, int m) {
  std::vector<double> x, w;
  panel_nodes(make_panels(a, b, {}, h), 16, x, w);
  std::vector<cplx> v = g(x);
  Mass r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.weighted += w[i] * std::pow(x[i], m) * std::abs(v[i]);
    r.peak = std::max(r.peak, std::abs(v[i]));
  }
  return r;
}

}  // namespace

std::vector<cplx> oracle_transform(const Field& f, TransformMode mode, const std::vector<double>& xi) {
  if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "the spectral oracle is one-dimensional");
  std::vector<cplx> out(xi.size(), 0.0), part;
  for (const auto& t : f.terms()) {
    forward(t.axial, mode, xi, part);
    for (std::size_t j = 0; j < xi.size(); ++j) out[j] += t.coef * part[j];
  }
  return out;
}

TransformGrid make_transform_grid(const AxialPtr& f, TransformMode mode, const Multiplier& phi,
                                  double shift, const OracleOptions& opt) {
  TransformGrid grid;
  grid.mode = mode;
  const double E = f->extent();
  if (!std::isfinite(E)) fail(ErrorCode::TailNotConverged, "transform input does not decay");
  grid.x_max = opt.x_max > 0 ? opt.x_max : std::max(2.0 * E, E + 20.0);
  auto g = [&](const std::vector<double>& xi) {
    std::vector<cplx> F;
    forward(f, mode, xi, F);
    for (std::size_t j = 0; j < xi.size(); ++j) F[j] *= phi(shift + xi[j] * xi[j]);
    return F;
  };
  // cut where the ξ-tail of the product is negligible
  const double fs = std::max(f->scale(), 1e-6);
  const double h_osc = M_PI / std::max(E, 1.0);
  double cut = std::max(4.0, 4.0 / fs);
  const double cap = 2048.0 * std::max(1.0, 1.0 / fs);
  const double h_tail = std::min(h_osc, cut / 16);
  Mass in = mass(g, 0.0, cut, h_tail, opt.orders);
  double tail = 0, total = 0;
  for (;;) {
    const Mass out = mass(g, cut, 2 * cut, std::min(h_osc, cut / 16), opt.orders);
    total = in.weighted;
    tail = out.weighted;
    // below the rounding floor of the forward quadrature nothing more can be resolved
    if (tail <= opt.tol * total || out.peak <= 1e-14 * in.peak) break;
    if (cut > cap)
      fail(ErrorCode::AliasWarning, "spectral tail above xi = " + std::to_string(cut) +
                                        " carries relative mass " + std::to_string(tail / total));
    in.weighted += out.weighted;
    in.peak = std::max(in.peak, out.peak);
    cut *= 2;
  }
  grid.xi_cut = 2 * cut;
  grid.tail = total > 0 ? tail / total : 0.0;
  // one wavelength of the highest resolved frequency per 16-node panel
  const double h = std::min({2 * M_PI / (2.2 * grid.x_max + E), grid.xi_cut / 64, 2 * h_osc});
  panel_nodes(make_panels(0.0, grid.xi_cut, {}, h), opt.nodes, grid.xi, grid.w);
  grid.g = g(grid.xi);
  for (double x : grid.xi)
    if (std::abs(phi(shift + x * x)) > opt.symbol_cap)
      fail(ErrorCode::UnboundedSymbol, "|phi| exceeds the cap at xi = " + std::to_string(x));
  return grid;
}

cplx SpectralAxial::eval(double x, int m) const {
  cplx s = 0.0;
  const double ph = 0.5 * M_PI * m;
  const bool sine = grid_.mode == TransformMode::sine;
  for (std::size_t j = 0; j < grid_.xi.size(); ++j) {
    const double a = grid_.xi[j] * x + ph;
    s += grid_.w[j] * std::pow(grid_.xi[j], m) * grid_.g[j] * (sine ? std::sin(a) : std::cos(a));
  }
  return (2.0 / M_PI) * s;
}

double SpectralAxial::scale() const { return std::min(1.0, M_PI / std::max(grid_.xi_cut, 1.0)); }

Field oracle_function_calculus(Boundary bc, const Multiplier& phi, double lambda_shift, const Field& f,
                               const OracleOptions& opt) {
  if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "the spectral oracle is one-dimensional");
  if (!(lambda_shift >= 0)) fail(ErrorCode::InvalidArgument, "lambda_shift must be >= 0");
  const TransformMode mode = mode_for(bc);
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (auto sp = std::dynamic_pointer_cast<const SpectralAxial>(t.axial); sp && sp->grid().mode == mode) {
      // already diagonal: multiply on the same nodes
      TransformGrid g = sp->grid();
      for (std::size_t j = 0; j < g.xi.size(); ++j) {
        const cplx v = phi(lambda_shift + g.xi[j] * g.xi[j]);
        if (std::abs(v) > opt.symbol_cap) fail(ErrorCode::UnboundedSymbol, "|phi| exceeds the cap");
        g.g[j] *= v;
      }
      out.push_back({t.coef, std::make_shared<SpectralAxial>(std::move(g)), {}});
      continue;
    }
    out.push_back({t.coef, std::make_shared<SpectralAxial>(make_transform_grid(t.axial, mode, phi, lambda_shift, opt)), {}});
  }
  return Field(1, std::move(out));
}

double oracle_parseval(const Field& f, TransformMode mode, const OracleOptions& opt) {
  if (f.terms().size() != 1) fail(ErrorCode::InvalidArgument, "Parseval check takes one term");
  OracleOptions o = opt;
  o.orders = 0;
  const auto& t = f.terms()[0];
  const TransformGrid g = make_transform_grid(t.axial, mode, [](double) { return cplx(1.0); }, 0.0, o);
  double s = 0;
  for (std::size_t j = 0; j < g.xi.size(); ++j) s += g.w[j] * std::norm(t.coef * g.g[j]);
  return 2.0 / M_PI * s;
}

GreenAxial::GreenAxial(AxialPtr f, cplx lambda, Boundary bc, int n_nodes)
    : f_(std::move(f)), lambda_(lambda), bc_(bc), n_(n_nodes) {
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0)
    fail(ErrorCode::BranchCut, "lambda on (-inf,0]");
  mu_ = std::sqrt(lambda);
  const double E = f_->extent();
  if (!std::isfinite(E)) fail(ErrorCode::TailNotConverged, "resolvent input does not decay");
  // expensive inputs (nested quadratures) are sampled once into Chebyshev tables
  if (f_->cost() >= 32.0 && f_->breakpoints().empty())
    f_ = std::make_shared<Tabulated>(f_, std::min(f_->max_order(), 3));
  reach_ = 46.0 / mu_.real();
  extent_ = E + reach_;
  scale_ = std::min(f_->scale(), 1.0 / std::abs(mu_));
}

cplx GreenAxial::eval(double x, int m) const {
  if (m >= 2) return lambda_ * eval(x, m - 2) - f_->eval(x, m - 2);
  const double a = std::max(f_->support_lo(), x - reach_), b = std::min(f_->extent(), x + reach_);
  if (!(b > a)) return 0.0;
  std::vector<double> br = f_->breakpoints();
  br.push_back(x);
  const double h = std::min(f_->scale(), 1.0 / std::abs(mu_));
  std::vector<double> y, w;
  panel_nodes(make_panels(a, b, br, h), n_, y, w);
  std::vector<cplx> fv;
  f_->eval_batch(y, 0, fv);
  const double s = bc_ == Boundary::dirichlet ? -1.0 : 1.0;
  cplx acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = x - y[i];
    const cplx direct = std::exp(-mu_ * std::abs(d)), image = std::exp(-mu_ * (x + y[i]));
    const cplx k = m == 0 ? (direct + s * image) / (2.0 * mu_)
                          : 0.5 * (-(d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0)) * direct - s * image);
    acc += w[i] * k * fv[i];
  }
  return acc;
}

Field oracle_resolvent(Boundary bc, cplx lambda, const Field& f) {
  if (f.dim() != 1) fail(ErrorCode::InvalidArgument, "the resolvent oracle is one-dimensional");
  if (lambda.imag() == 0.0 && lambda.real() <= 0.0) fail(ErrorCode::BranchCut, "lambda on (-inf,0]");
  std::vector<Term> out;
  for (const auto& t : f.terms())
    out.push_back({t.coef, std::make_shared<GreenAxial>(t.axial, lambda, bc), {}});
  return Field(1, std::move(out));
}

}  // namespace hsl
