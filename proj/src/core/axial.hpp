#pragma once
#include <complex>
#include <limits>
#include <memory>
#include <vector>

namespace hsl {

using cplx = std::complex<double>;
constexpr int kAnyOrder = 1000;
constexpr double kInf = std::numeric_limits<double>::infinity();

// A scalar function of x1 > 0 together with its derivative closures.
class Axial {
 public:
  virtual ~Axial() = default;
  // d^m/dx^m at x
  virtual cplx eval(double x, int m) const = 0;
  virtual void eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const;
  // highest derivative order that exists classically
  virtual int max_order() const { return kAnyOrder; }
  // points where some derivative is discontinuous
  virtual std::vector<double> breakpoints() const { return {}; }
  // radius beyond which all tabulated derivatives are negligible (inf: no decay)
  virtual double extent() const = 0;
  // length scale of the finest feature
  virtual double scale() const { return 1.0; }
  // scale() holds on [0, fine_extent]; past it features are no finer than coarse_scale()
  virtual double fine_extent() const { return extent(); }
  virtual double coarse_scale() const { return scale(); }
  // support is contained in [support_lo, extent] (0 if not separated from the boundary)
  virtual double support_lo() const { return 0.0; }
  // relative cost of one evaluation (symbolic ~ 1)
  virtual double cost() const { return 1.0; }
};

using AxialPtr = std::shared_ptr<const Axial>;

// Σ c_i x^{a_i} exp(-b_i x - q_i x^2)
struct ExpTerm {
  cplx c;
  double a;
  cplx b;
  cplx q;
};

class ExpPoly final : public Axial {
 public:
  explicit ExpPoly(std::vector<ExpTerm> terms);
  cplx eval(double x, int m) const override;
  double extent() const override { return extent_; }
  double scale() const override { return scale_; }
  const std::vector<ExpTerm>& terms() const { return derivs_[0]; }

 private:
  std::vector<ExpTerm> terms_at(int m) const;
  std::vector<std::vector<ExpTerm>> derivs_;
  double extent_, scale_;
};

// Polynomial in the local variable (x - origin).
struct Poly {
  std::vector<double> c;
  double eval(double t) const;
  Poly deriv() const;
  Poly operator*(const Poly& o) const;
  Poly operator+(const Poly& o) const;
  Poly scaled(double s) const;
  static Poly pow(const Poly& p, int n);
};

// Piecewise polynomial: constant `left` below breaks.front(), constant `right`
// above breaks.back(), pieces[i] on [breaks[i], breaks[i+1]] in (x - origins[i])
// (origins default to the left breaks).
class PiecewisePoly final : public Axial {
 public:
  PiecewisePoly(std::vector<double> breaks, std::vector<Poly> pieces, double left, double right,
                int smoothness, std::vector<double> origins = {});
  cplx eval(double x, int m) const override;
  int max_order() const override { return smoothness_; }
  std::vector<double> breakpoints() const override { return breaks_; }
  double extent() const override;
  double scale() const override { return scale_; }
  double support_lo() const override { return left_ == 0.0 ? breaks_.front() : 0.0; }

 private:
  std::vector<double> breaks_, origins_;
  std::vector<std::vector<Poly>> dpieces_;  // dpieces_[m][i]
  double left_, right_;
  int smoothness_;
  double scale_;
};

// d^n/dx^n of base
class DerivAxial final : public Axial {
 public:
  DerivAxial(AxialPtr base, int n) : base_(std::move(base)), n_(n) {}
  cplx eval(double x, int m) const override { return base_->eval(x, m + n_); }
  void eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const override {
    base_->eval_batch(xs, m + n_, out);
  }
  int max_order() const override { return base_->max_order() - n_; }
  std::vector<double> breakpoints() const override { return base_->breakpoints(); }
  double extent() const override { return base_->extent(); }
  double scale() const override { return base_->scale(); }
  double support_lo() const override { return base_->support_lo(); }
  double cost() const override { return base_->cost(); }

 private:
  AxialPtr base_;
  int n_;
};

// x^theta · base(x), Leibniz closure
class PowerTimes final : public Axial {
 public:
  PowerTimes(double theta, AxialPtr base) : theta_(theta), base_(std::move(base)) {}
  cplx eval(double x, int m) const override;
  int max_order() const override { return base_->max_order(); }
  std::vector<double> breakpoints() const override { return base_->breakpoints(); }
  double extent() const override;
  double scale() const override { return base_->scale(); }
  double support_lo() const override { return base_->support_lo(); }
  double cost() const override { return base_->cost(); }
  double theta() const { return theta_; }

 private:
  double theta_;
  AxialPtr base_;
};

// a(x)·b(x)
class ProductAxial final : public Axial {
 public:
  ProductAxial(AxialPtr a, AxialPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  cplx eval(double x, int m) const override;
  int max_order() const override { return std::min(a_->max_order(), b_->max_order()); }
  std::vector<double> breakpoints() const override;
  double extent() const override { return std::min(a_->extent(), b_->extent()); }
  double scale() const override { return std::min(a_->scale(), b_->scale()); }
  double support_lo() const override { return std::max(a_->support_lo(), b_->support_lo()); }
  double cost() const override { return a_->cost() + b_->cost(); }

 private:
  AxialPtr a_, b_;
};

// amp · base(r x)
class ScaledArg final : public Axial {
 public:
  ScaledArg(AxialPtr base, double r, cplx amp = 1.0) : base_(std::move(base)), r_(r), amp_(amp) {}
  cplx eval(double x, int m) const override;
  void eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const override;
  int max_order() const override { return base_->max_order(); }
  std::vector<double> breakpoints() const override;
  double extent() const override { return base_->extent() / r_; }
  double scale() const override { return base_->scale() / r_; }
  double support_lo() const override { return base_->support_lo() / r_; }
  double cost() const override { return base_->cost(); }

 private:
  AxialPtr base_;
  double r_;
  cplx amp_;
};

// Σ c_i f_i
class SumAxial final : public Axial {
 public:
  SumAxial(std::vector<cplx> c, std::vector<AxialPtr> f);
  cplx eval(double x, int m) const override;
  void eval_batch(const std::vector<double>& xs, int m, std::vector<cplx>& out) const override;
  int max_order() const override;
  std::vector<double> breakpoints() const override;
  double extent() const override;
  double scale() const override;
  double support_lo() const override;
  double cost() const override;

 private:
  std::vector<cplx> c_;
  std::vector<AxialPtr> f_;
};

// G(x) = ∫_0^x g
class Antiderivative final : public Axial {
 public:
  explicit Antiderivative(AxialPtr g);
  cplx eval(double x, int m) const override;
  int max_order() const override { return g_->max_order() + 1; }
  std::vector<double> breakpoints() const override { return g_->breakpoints(); }
  double extent() const override { return extent_; }
  double scale() const override { return g_->scale(); }
  double cost() const override { return 16.0 * g_->cost(); }

 private:
  AxialPtr g_;
  double mass_ = 0.0, extent_ = kInf;
  std::vector<double> nodes_;  // panel boundaries
  std::vector<cplx> cum_;      // ∫_0^{nodes_[i]} g
};

// Piecewise Chebyshev interpolant of a smooth expensive profile, one table per
// derivative order; zero beyond the source extent.
class Tabulated final : public Axial {
 public:
  Tabulated(AxialPtr src, int orders, double tol = 1e-13);
  cplx eval(double x, int m) const override;
  int max_order() const override { return orders_; }
  double extent() const override { return extent_; }
  double scale() const override { return scale_; }
  double fine_extent() const override { return fine_extent_; }
  double coarse_scale() const override { return coarse_scale_; }
  double support_lo() const override { return 0.0; }
  std::size_t pieces() const;

 private:
  // flat layout: piece i of a table owns re/im[off[i], off[i+1])
  struct Table {
    std::vector<double> a, b, re, im;
    std::vector<std::size_t> off;
  };
  std::vector<Table> tables_;
  int orders_;
  double extent_, scale_, fine_extent_, coarse_scale_;
};

// Convenience constructors
AxialPtr exp_poly(std::vector<ExpTerm> t);
AxialPtr exp_decay(double b, double coef = 1.0);                 // coef e^{-bx}
AxialPtr x_pow_exp(double a, double b, double coef = 1.0);       // coef x^a e^{-bx}
AxialPtr x_pow_gauss(double a, double q, double coef = 1.0);     // coef x^a e^{-qx^2}
AxialPtr zeta_cutoff();                                          // 1 on [0,1/2], 0 on [3/4,∞)
AxialPtr bump(double center, double halfwidth, int power = 8);   // (1-s^2)^power
AxialPtr deriv(const AxialPtr& f, int n);

}  // namespace hsl
