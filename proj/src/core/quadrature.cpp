#include "core/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "core/errors.hpp"

namespace hsl {

namespace {

// Golub-Welsch: diagonal a, off-diagonal sqrt(b), zeroth moment mu0.
Rule golub_welsch(const std::vector<double>& a, const std::vector<double>& b, double mu0) {
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = a[i];
  for (int i = 0; i + 1 < n; ++i) sub[i] = std::sqrt(b[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v;
  }
  return r;
}

// Jacobi weight (1-t)^al (1+t)^be on [-1,1].
Rule gauss_jacobi(int n, double al, double be) {
  std::vector<double> a(n), b(std::max(n - 1, 0));
  const double ab = al + be;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0)
      a[k] = (be - al) / (ab + 2.0);
    else
      a[k] = (be * be - al * al) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    b[k - 1] = 4.0 * k * (k + al) * (k + be) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(al + 1.0) +
                              std::lgamma(be + 1.0) - std::lgamma(ab + 2.0));
  return golub_welsch(a, b, mu0);
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto r = std::make_unique<Rule>(gauss_jacobi(n, 0.0, 0.0));
  // symmetrize to remove eigen-solver jitter
  for (int i = 0; i < n / 2; ++i) {
    double xs = 0.5 * (r->x[n - 1 - i] - r->x[i]);
    double ws = 0.5 * (r->w[n - 1 - i] + r->w[i]);
    r->x[i] = -xs;
    r->x[n - 1 - i] = xs;
    r->w[i] = r->w[n - 1 - i] = ws;
  }
  if (n % 2 == 1) r->x[n / 2] = 0.0;
  const Rule& ref = *r;
  cache.emplace(n, std::move(r));
  return ref;
}

Rule gauss_jacobi01(int n, double alpha) {
  if (!(alpha > -1.0)) fail(ErrorCode::NonIntegrableWeight, "Jacobi exponent must exceed -1");
  Rule r = gauss_jacobi(n, 0.0, alpha);
  const double scale = std::pow(2.0, -alpha - 1.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.x[i] = 0.5 * (1.0 + r.x[i]);
    r.w[i] *= scale;
  }
  return r;
}

Rule gauss_hermite(int n) {
  std::vector<double> a(n, 0.0), b(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) b[k - 1] = 0.5 * k;
  return golub_welsch(a, b, std::sqrt(M_PI));
}

void QuadratureSpec::validate() const {
  if (n_boundary < 2 || n_bulk < 2 || n_tangential < 2)
    fail(ErrorCode::InvalidArgument, "quadrature node counts must be >= 2");
  if (!(r_max > 1.0)) fail(ErrorCode::InvalidArgument, "quad.r_max must exceed 1");
  if (!(tail_tol > 0.0)) fail(ErrorCode::InvalidArgument, "quad.tail_tol must be positive");
  if (grading_levels < 1 || grading_levels > 60)
    fail(ErrorCode::InvalidArgument, "quad.grading_levels out of range");
  if (!std::isnan(jacobi_exponent) && !(jacobi_exponent > -1.0))
    fail(ErrorCode::NonIntegrableWeight, "quad.jacobi_exponent must exceed -1");
}

std::vector<Interval> make_panels(double a, double b, const std::vector<double>& breaks,
                                  double hmax) {
  std::vector<double> pts{a};
  std::vector<double> bs = breaks;
  std::sort(bs.begin(), bs.end());
  for (double t : bs)
    if (t > a + 1e-14 * std::max(1.0, std::abs(a)) && t < b - 1e-14 * std::max(1.0, std::abs(b)))
      pts.push_back(t);
  pts.push_back(b);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    if (len <= 0) continue;
    int m = 1;
    if (hmax > 0 && std::isfinite(hmax)) m = std::max(1, static_cast<int>(std::ceil(len / hmax)));
    m = std::min(m, 1 << 20);
    for (int j = 0; j < m; ++j)
      out.push_back({pts[i] + len * j / m, j + 1 == m ? pts[i + 1] : pts[i] + len * (j + 1) / m});
  }
  return out;
}

void panel_nodes(const std::vector<Interval>& panels, int n, std::vector<double>& x,
                 std::vector<double>& w) {
  const Rule& gl = gauss_legendre(n);
  x.reserve(x.size() + panels.size() * n);
  w.reserve(w.size() + panels.size() * n);
  for (const auto& p : panels) {
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    for (int i = 0; i < n; ++i) {
      x.push_back(c + h * gl.x[i]);
      w.push_back(h * gl.w[i]);
    }
  }
}

namespace {

constexpr double kVanishes = std::numeric_limits<double>::infinity();

double detect_exponent(const BatchReal& F, double a0) {
  std::vector<double> xs{a0 * 1e-10, a0 * 1e-9}, v(2);
  F(xs, v);
  const double f1 = std::abs(v[0]), f2 = std::abs(v[1]);
  // identically zero at the boundary (support away from 0, or underflow)
  if (f1 == 0.0 && f2 == 0.0) return kVanishes;
  if (!(f1 > 0) || !(f2 > 0) || !std::isfinite(f1) || !std::isfinite(f2)) return 0.0;
  double e = std::log10(f2 / f1);
  // snap to nearby integers: smooth integrands have integer leading powers
  if (std::abs(e - std::round(e)) < 2e-3) e = std::round(e);
  return std::clamp(e, -0.999, 40.0);
}

double integrate_panels(const BatchReal& F, const std::vector<Interval>& panels, int n,
                        double weight_exp) {
  if (panels.empty()) return 0.0;
  std::vector<double> x, w, v;
  panel_nodes(panels, n, x, w);
  v.resize(x.size());
  F(x, v);
  KahanSum<double> s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wt = weight_exp == 0.0 ? 1.0 : std::pow(x[i], weight_exp);
    s.add(w[i] * wt * v[i]);
  }
  return s.sum;
}

}  // namespace

HalfLineResult integrate_halfline(const BatchReal& F, const HalfLineProblem& prob,
                                  const QuadratureSpec& q) {
  q.validate();
  HalfLineResult res;
  const double a0 = std::ldexp(1.0, -q.grading_levels);
  double total_exp;
  if (!std::isnan(q.jacobi_exponent)) {
    total_exp = q.jacobi_exponent;
  } else {
    const double e = detect_exponent(F, a0);
    total_exp = e == kVanishes ? std::max(prob.weight_exp, 0.0) : prob.weight_exp + e;
  }
  if (!(total_exp > -1.0 + 1e-9))
    fail(ErrorCode::QuadratureDiverged, "integrand not integrable at the boundary (exponent " +
                                            std::to_string(total_exp) + ")");
  res.boundary_exponent = total_exp;

  // boundary cell (0,a0): x^total_exp absorbed by the Jacobi rule
  KahanSum<double> acc;
  {
    Rule gj = gauss_jacobi01(q.n_boundary, total_exp);
    std::vector<double> x(gj.size()), v(gj.size());
    for (std::size_t i = 0; i < gj.size(); ++i) x[i] = a0 * gj.x[i];
    F(x, v);
    const double cell = std::pow(a0, total_exp + 1.0);
    for (std::size_t i = 0; i < gj.size(); ++i) {
      const double rest = std::pow(x[i], prob.weight_exp - total_exp);
      acc.add(cell * gj.w[i] * v[i] * rest);
    }
  }
  double R = q.r_max;
  if (std::isfinite(prob.extent)) R = std::max(R, prob.extent);
  const double hmax = 4.0 * prob.scale;
  std::vector<double> breaks = prob.breaks;
  for (double b = a0; b < R; b *= 2.0) breaks.push_back(b);
  std::vector<Interval> panels;
  if (prob.zones.empty()) {
    panels = make_panels(a0, R, breaks, hmax);
  } else {
    // zones whose edges lie within 25% of each other merge: farthest edge, finest scale
    std::vector<std::pair<double, double>> zones = prob.zones;
    std::sort(zones.begin(), zones.end());
    std::vector<std::pair<double, double>> merged;
    for (std::size_t i = 0; i < zones.size();) {
      std::pair<double, double> m = zones[i];
      const double lim = 1.25 * zones[i].first;
      for (; i < zones.size() && zones[i].first <= lim; ++i) {
        m.first = zones[i].first;
        m.second = std::min(m.second, zones[i].second);
      }
      merged.push_back(m);
    }
    for (const auto& z : merged) breaks.push_back(z.first);
    for (const Interval& iv : make_panels(a0, R, breaks, std::numeric_limits<double>::infinity())) {
      const double mid = 0.5 * (iv.a + iv.b);
      double h = std::numeric_limits<double>::infinity();
      for (const auto& z : merged)
        if (z.first > mid) h = std::min(h, 4.0 * z.second);
      auto sub = make_panels(iv.a, iv.b, {}, h);
      panels.insert(panels.end(), sub.begin(), sub.end());
    }
  }
  acc.add(integrate_panels(F, panels, q.n_bulk, prob.weight_exp));
  res.value = acc.sum;
  res.r_used = R;
  if (prob.check_tail) {
    std::vector<Interval> tp = make_panels(R, 2.0 * R, prob.breaks, std::max(hmax, R / 64.0));
    res.tail = integrate_panels(F, tp, q.n_bulk, prob.weight_exp);
    if (!std::isfinite(res.tail) ||
        (std::abs(res.tail) > 10.0 * q.tail_tol * std::abs(res.value) && std::abs(res.tail) > 1e-300))
      fail(ErrorCode::TailNotConverged, "tail beyond r=" + std::to_string(R) +
                                            " contributes " + std::to_string(res.tail));
    res.value += res.tail;
  }
  if (!std::isfinite(res.value)) fail(ErrorCode::QuadratureDiverged, "non-finite integral");
  return res;
}

void tangential_nodes(double L, double scale, int n, std::vector<double>& x,
                      std::vector<double>& w) {
  // fine panels of width <= scale on [-c,c], then geometrically growing outward
  const double c = std::min(L, std::max(4.0 * scale, 1.0));
  std::vector<Interval> panels = make_panels(-c, c, {0.0}, scale);
  double a = c;
  double h = scale;
  while (a < L) {
    h = std::min(h * 1.5, std::max(scale, 0.25 * a));
    double b = std::min(L, a + h);
    panels.push_back({a, b});
    panels.push_back({-b, -a});
    a = b;
  }
  std::sort(panels.begin(), panels.end(), [](const Interval& u, const Interval& v) { return u.a < v.a; });
  panel_nodes(panels, n, x, w);
}

}  // namespace hsl
