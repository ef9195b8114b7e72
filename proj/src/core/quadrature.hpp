#pragma once
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace hsl {

struct Rule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

// Gauss-Legendre on [-1,1]; cached, thread-safe.
const Rule& gauss_legendre(int n);
// Gauss rule for the weight x^alpha on (0,1); weights include x^alpha.
Rule gauss_jacobi01(int n, double alpha);
// Gauss-Hermite for the weight e^{-x^2} on R.
Rule gauss_hermite(int n);

struct QuadratureSpec {
  double jacobi_exponent = std::numeric_limits<double>::quiet_NaN();  // NaN: detect
  int n_boundary = 24;
  int n_bulk = 16;
  double r_max = 40.0;
  double tail_tol = 1e-10;
  int grading_levels = 14;
  int n_tangential = 8;  // nodes per tangential panel

  void validate() const;
};

struct Interval {
  double a, b;
};

// Split [a,b] at interior breakpoints, then subdivide so no piece exceeds hmax.
std::vector<Interval> make_panels(double a, double b, const std::vector<double>& breaks,
                                  double hmax);

// Append Gauss-Legendre nodes of order n on each panel.
void panel_nodes(const std::vector<Interval>& panels, int n, std::vector<double>& x,
                 std::vector<double>& w);

using BatchReal = std::function<void(const std::vector<double>& x, std::vector<double>& out)>;

struct HalfLineProblem {
  double weight_exp = 0.0;  // integrand multiplied by x^weight_exp
  std::vector<double> breaks;
  double extent = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  std::vector<std::pair<double, double>> zones;  // optional (extent, scale); overrides scale where given
  bool check_tail = true;
};

struct HalfLineResult {
  double value = 0.0;
  double tail = 0.0;
  double r_used = 0.0;
  double boundary_exponent = 0.0;
};

// ∫_0^∞ F(x) x^weight_exp dx with a Gauss-Jacobi cell at the boundary, geometric
// panels up to 1 and dyadic panels beyond; tail certified by doubling the radius.
HalfLineResult integrate_halfline(const BatchReal& F, const HalfLineProblem& prob,
                                  const QuadratureSpec& q);

// Symmetric node set on [-L,L] for tangential directions (finer near 0).
void tangential_nodes(double L, double scale, int n, std::vector<double>& x,
                      std::vector<double>& w);

// Kahan-compensated accumulator.
template <class T>
struct KahanSum {
  T sum{}, c{};
  void add(T v) {
    T y = v - c;
    T t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace hsl
