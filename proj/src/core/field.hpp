#pragma once
#include <array>
#include <vector>

#include "core/axial.hpp"

namespace hsl {

// coef · ∂^order G_width(x), G_s(x) = (4πs)^{-1/2} e^{-x²/(4s)}
struct HermiteAtom {
  cplx coef;
  int order;
  cplx width;
};

// coef · e^{i eta x}
struct PlaneWave {
  cplx coef;
  double eta;
};

// A function of one tangential variable: finite sum of Gaussian derivatives and
// plane waves. `window` bounds the region where plane-wave sums are trusted.
struct Tangential1D {
  std::vector<HermiteAtom> hermite;
  std::vector<PlaneWave> waves;
  double window = kInf;

  cplx eval(double x, int m) const;
  Tangential1D derivative(int n) const;
  Tangential1D heat(cplx z) const;  // convolution with G_z
  double extent() const;
  double scale() const;
  static Tangential1D gaussian(double s, cplx coef = 1.0, int order = 0);
};

using MultiIndex = std::array<int, 3>;

struct Term {
  cplx coef;
  AxialPtr axial;
  std::vector<Tangential1D> tang;  // size d-1
};

class Field {
 public:
  Field() = default;
  explicit Field(int d) : d_(d) {}
  Field(int d, std::vector<Term> terms);

  static Field axial(AxialPtr a, cplx coef = 1.0);  // d = 1
  static Field separable(AxialPtr a, std::vector<Tangential1D> tang, cplx coef = 1.0);
  static Field zero(int d) { return Field(d); }

  int dim() const { return d_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int k_max() const;

  cplx eval(double x1, const std::vector<double>& xt, const MultiIndex& alpha = {0, 0, 0}) const;
  cplx eval(double x1, int m = 0) const { return eval(x1, {}, {m, 0, 0}); }

  Field derivative(const MultiIndex& alpha) const;
  Field laplacian() const;
  Field scaled(cplx c) const;
  Field operator+(const Field& o) const;
  Field operator-(const Field& o) const;
  Field multiply_axial(const AxialPtr& a) const;

  std::vector<double> breakpoints() const;
  double extent() const;
  double scale() const;
  // (extent, scale) of each term: the fine scale of a short-range term stops mattering past its extent
  std::vector<std::pair<double, double>> scale_zones() const;
  double tangential_extent(int j) const;
  double tangential_scale(int j) const;

  // Values on a tensor grid x1 × tangential nodes (row-major in x1).
  void eval_grid(const std::vector<double>& x1, const std::vector<std::vector<double>>& xt,
                 const MultiIndex& alpha, std::vector<cplx>& out) const;

 private:
  int d_ = 1;
  std::vector<Term> terms_;
};

// all multi-indices in d dims with |alpha| == n
std::vector<MultiIndex> multi_indices(int d, int n);

}  // namespace hsl
