#include "core/norms.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace hsl {

const char* boundary_name(Boundary b) { return b == Boundary::dirichlet ? "dir" : "neu"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "dir" || s == "dirichlet" || s == "Dirichlet") return Boundary::dirichlet;
  if (s == "neu" || s == "neumann" || s == "Neumann") return Boundary::neumann;
  fail(ErrorCode::InvalidArgument, "unknown boundary condition '" + s + "'");
}

void SpaceParams::validate(bool sobolev) const {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorCode::InvalidArgument, "p must lie in (1,inf)");
  if (k < -1) fail(ErrorCode::InvalidArgument, "k must be >= -1");
  if (d < 1 || d > 3) fail(ErrorCode::InvalidArgument, "d must be 1, 2 or 3");
  if (!std::isfinite(gamma)) fail(ErrorCode::InvalidArgument, "gamma must be finite");
  if (sobolev) {
    for (int j = 1; j <= 64; ++j)
      if (std::abs(gamma - (j * p - 1.0)) < 1e-12)
        fail(ErrorCode::HypothesisViolated,
             "gamma hits the excluded value " + std::to_string(j) + "p-1");
  }
}

double PowerWeight::operator()(double x1) const { return std::pow(x1, gamma); }

namespace {

struct TangGrid {
  std::vector<std::vector<double>> x;
  std::vector<double> w;  // tensor weights
};

TangGrid tangential_grid(const Field& f, const QuadratureSpec& q) {
  TangGrid g;
  g.w = {1.0};
  for (int j = 0; j + 1 < f.dim(); ++j) {
    const double L = f.tangential_extent(j);
    if (!std::isfinite(L))
      fail(ErrorCode::TailNotConverged, "tangential factor does not decay");
    std::vector<double> x, w;
    tangential_nodes(L, f.tangential_scale(j), q.n_tangential, x, w);
    std::vector<double> nw;
    for (double a : g.w)
      for (double b : w) nw.push_back(a * b);
    g.w = std::move(nw);
    g.x.push_back(std::move(x));
  }
  return g;
}

}  // namespace

double weighted_lp_power(const Field& f, const MultiIndex& alpha, double p, double gamma,
                         const QuadratureSpec& q) {
  if (f.is_zero()) return 0.0;
  const TangGrid tg = tangential_grid(f, q);
  BatchReal F = [&](const std::vector<double>& x, std::vector<double>& out) {
    std::vector<cplx> v;
    f.eval_grid(x, tg.x, alpha, v);
    const std::size_t nt = tg.w.size();
    out.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        const double a = std::abs(v[i * nt + j]);
        s += tg.w[j] * (p == 2.0 ? a * a : std::pow(a, p));
      }
      out[i] = s;
    }
  };
  HalfLineProblem prob;
  prob.weight_exp = gamma;
  prob.breaks = f.breakpoints();
  prob.extent = f.extent();
  prob.scale = f.scale();
  prob.zones = f.scale_zones();
  return integrate_halfline(F, prob, q).value;
}

double weighted_lp_norm(const Field& f, double p, double gamma, const QuadratureSpec& q) {
  if (!(gamma > -1.0))
    fail(ErrorCode::NonIntegrableWeight, "weight exponent " + std::to_string(gamma) + " <= -1");
  if (!(p > 1.0)) fail(ErrorCode::InvalidArgument, "p must exceed 1");
  return std::pow(std::max(0.0, weighted_lp_power(f, {0, 0, 0}, p, gamma, q)), 1.0 / p);
}

namespace {
double sobolev_sum(const Field& f, const SpaceParams& sp, const QuadratureSpec& q, bool homogeneous) {
  sp.validate(false);
  if (f.is_zero()) return 0.0;
  if (f.dim() != sp.d) fail(ErrorCode::InvalidArgument, "field dimension differs from SpaceParams.d");
  if (f.k_max() < sp.k)
    fail(ErrorCode::InsufficientDerivatives, "field has k_max " + std::to_string(f.k_max()) +
                                                 " < k = " + std::to_string(sp.k));
  double s = 0.0;
  for (int n = 0; n <= sp.k; ++n) {
    const double g = homogeneous ? sp.gamma + n * sp.p : sp.gamma;
    for (const auto& a : multi_indices(sp.d, n)) s += weighted_lp_norm(f.derivative(a), sp.p, g, q);
  }
  return s;
}
}  // namespace

double weighted_sobolev_norm(const Field& f, const SpaceParams& sp, const QuadratureSpec& q) {
  return sobolev_sum(f, sp, q, false);
}

double homogeneous_sobolev_norm(const Field& f, const SpaceParams& sp, const QuadratureSpec& q) {
  return sobolev_sum(f, sp, q, true);
}

HardyResult hardy_check(const Field& u, double p, double gamma, const QuadratureSpec& q,
                        double trace_tol, bool allow_critical) {
  if (u.dim() != 1) fail(ErrorCode::HypothesisViolated, "Hardy check takes axial fields (d = 1)");
  if (std::abs(gamma - (p - 1.0)) < 1e-12 && !allow_critical)
    fail(ErrorCode::HypothesisViolated, "gamma = p-1 is excluded");
  HardyResult r;
  if (u.is_zero()) return r;
  if (gamma < p - 1.0 && !allow_critical) {
    TraceValue tr = trace(u, 0, trace_tol);
    if (std::abs(tr.value()) > trace_tol)
      fail(ErrorCode::HypothesisViolated, "gamma < p-1 requires Tr(u) = 0");
  }
  r.lhs = std::pow(weighted_lp_power(u, {0, 0, 0}, p, gamma - p, q), 1.0 / p);
  r.rhs = std::pow(weighted_lp_power(u, {1, 0, 0}, p, gamma, q), 1.0 / p);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  return r;
}

Field multiply_power(const Field& f, double theta) {
  std::vector<Term> t = f.terms();
  for (auto& term : t) term.axial = std::make_shared<PowerTimes>(theta, term.axial);
  return Field(f.dim(), std::move(t));
}

cplx Extension::eval(double y1, const std::vector<double>& yt, const MultiIndex& alpha) const {
  if (y1 >= 0.0) return f_.eval(y1, yt, alpha);
  // ∂^alpha of f(-y1) picks up (-1)^{alpha1}; odd reflection one more sign
  double s = (alpha[0] % 2 == 0) ? 1.0 : -1.0;
  if (parity_ == Parity::odd) s = -s;
  return s * f_.eval(-y1, yt, alpha);
}

double Extension::lp_norm(double p, double gamma, const QuadratureSpec& q) const {
  if (!(gamma > -1.0)) fail(ErrorCode::NonIntegrableWeight, "weight exponent <= -1");
  if (f_.is_zero()) return 0.0;
  if (f_.dim() != 1) {
    // tangential directions are unaffected by the reflection
    const double pos = weighted_lp_power(f_, {0, 0, 0}, p, gamma, q);
    return std::pow(2.0 * pos, 1.0 / p);
  }
  HalfLineProblem prob;
  prob.weight_exp = gamma;
  prob.breaks = f_.breakpoints();
  prob.extent = f_.extent();
  prob.scale = f_.scale();
  prob.zones = f_.scale_zones();
  auto side = [&](double sgn) {
    BatchReal F = [&](const std::vector<double>& x, std::vector<double>& out) {
      out.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::pow(std::abs(eval(sgn * x[i])), p);
    };
    return integrate_halfline(F, prob, q).value;
  };
  return std::pow(side(1.0) + side(-1.0), 1.0 / p);
}

Extension extend(const Field& f, Parity parity) { return Extension(f, parity); }

TraceValue trace(const Field& f, int order, double tol, double h) {
  if (f.k_max() < order + 1)
    fail(ErrorCode::InsufficientDerivatives, "trace of order " + std::to_string(order) +
                                                 " needs k_max >= " + std::to_string(order + 1));
  TraceValue tv;
  tv.order = order;
  std::vector<std::vector<double>> pts;
  if (f.dim() == 1) pts = {{}};
  else if (f.dim() == 2) pts = {{-1.0}, {0.0}, {0.5}, {2.0}};
  else pts = {{0.0, 0.0}, {-1.0, 0.5}, {2.0, -0.3}};
  for (const auto& xt : pts) {
    const MultiIndex a{order, 0, 0};
    const cplx v1 = f.eval(h, xt, a), v2 = f.eval(h / 2, xt, a), v3 = f.eval(h / 4, xt, a);
    const cplx r1 = 2.0 * v2 - v1, r2 = 2.0 * v3 - v2;
    const cplx fin = (4.0 * r2 - r1) / 3.0;
    const double res = std::abs(fin - r2);
    tv.points.push_back(xt);
    tv.values.push_back(fin);
    tv.residual = std::max(tv.residual, res);
    if (!std::isfinite(res) || res > tol * std::max(1.0, std::abs(fin)))
      fail(ErrorCode::NoTrace, "Richardson residual " + std::to_string(res) + " exceeds tolerance");
  }
  return tv;
}

}  // namespace hsl
