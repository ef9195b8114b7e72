#include <chrono>
#include <cmath>

#include "core/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "kernels/growth.hpp"
#include "kernels/semigroup.hpp"

using namespace hsl;
using testing_util::throws_code;

namespace {

const Boundary DIR = Boundary::dirichlet, NEU = Boundary::neumann;

// (1+z)^{-3/2} x e^{-x²/(4(1+z))}: odd Gaussian moment under the heat flow
cplx odd_flow(cplx z, double x) { return std::pow(1.0 + z, -1.5) * x * std::exp(-x * x / (4.0 * (1.0 + z))); }
cplx even_flow(cplx z, double x) { return std::pow(1.0 + z, -0.5) * std::exp(-x * x / (4.0 * (1.0 + z))); }

Field odd_gauss() { return Field::axial(x_pow_gauss(1, 0.25)); }
Field even_gauss() { return Field::axial(x_pow_gauss(0, 0.25)); }

std::vector<double> sample_grid() {
  std::vector<double> g;
  for (double x = 0.05; x < 8.0; x += 0.17) g.push_back(x);
  return g;
}

double sup_diff(const Field& a, const Field& b, const std::vector<double>& xs) {
  double m = 0;
  for (double x : xs) m = std::max(m, std::abs(a.eval(x) - b.eval(x)));
  return m;
}

// x^{-a}|log x|^{-beta} ζ(x)
class LogSingular final : public Axial {
 public:
  LogSingular(double a, double beta) : a_(a), beta_(beta), z_(zeta_cutoff()) {}
  cplx eval(double x, int m) const override {
    if (m != 0) fail(ErrorCode::DerivativeOrderLost, "value only");
    if (x <= 0 || x >= 0.75) return 0.0;
    return std::pow(x, -a_) * std::pow(-std::log(x), -beta_) * z_->eval(x, 0);
  }
  int max_order() const override { return 0; }
  std::vector<double> breakpoints() const override { return {0.5, 0.75}; }
  double extent() const override { return 0.75; }
  double scale() const override { return 0.05; }

 private:
  double a_, beta_;
  AxialPtr z_;
};

}  // namespace

TEST_SUITE("kernels_semigroups") {
  TEST_CASE("free kernel values, symmetry, and normalization") {
    CHECK(heat_kernel_free(SectorTime::real(1), {0.0}).real() == doctest::Approx(1 / std::sqrt(4 * M_PI)).epsilon(1e-15));
    CHECK(heat_kernel_free(SectorTime::real(1), {0.0}).real() == doctest::Approx(0.2820948).epsilon(1e-7));
    const SectorTime z{cplx(0.7, 0.4), 1.2};
    for (double x : {0.1, 1.3, 4.0}) CHECK(std::abs(heat_kernel_free(z, {x}) - heat_kernel_free(z, {-x})) == 0.0);
    // 2D trapezoid (spectrally accurate for Gaussians)
    for (double t : {0.5, 2.0}) {
      const double L = 12 * std::sqrt(t), h = L / 200;
      double s = 0;
      for (int i = -200; i <= 200; ++i)
        for (int j = -200; j <= 200; ++j) s += heat_kernel_free(SectorTime::real(t), {i * h, j * h}).real();
      CHECK(std::abs(s * h * h - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("half-space kernels") {
    const double e1 = (1 - std::exp(-1.0)) / std::sqrt(4 * M_PI);
    CHECK(heat_kernel_halfspace(SectorTime::real(1), 1, 1, DIR).real() == doctest::Approx(e1).epsilon(1e-14));
    for (double t : {0.01, 0.3, 1.0, 7.0})
      for (double y : {0.05, 0.5, 2.0, 9.0}) {
        CHECK(heat_kernel_halfspace(SectorTime::real(t), 0.0, y, DIR) == cplx(0.0));
        for (double x : {0.02, 0.4, 1.5, 6.0}) {
          const cplx m = heat_kernel_halfspace(SectorTime::real(t), x, y, DIR);
          const cplx p = heat_kernel_halfspace(SectorTime::real(t), x, y, NEU);
          CHECK(m.real() >= 0);
          CHECK(p.real() >= 0);
          const double g = 2 * heat_kernel_free(SectorTime::real(t), {x - y}).real();
          CHECK(std::abs((m + p).real() - g) <= 1e-15 * std::max(1.0, g));
        }
        // ∂_x H^{1,+} at x = 0 by a centred difference across the even extension
        const double h = 1e-5;
        const double d = (heat_kernel_free(SectorTime::real(t), {h - y}).real() +
                          heat_kernel_free(SectorTime::real(t), {h + y}).real() -
                          heat_kernel_free(SectorTime::real(t), {-h - y}).real() -
                          heat_kernel_free(SectorTime::real(t), {-h + y}).real()) / (2 * h);
        CHECK(std::abs(d) <= 1e-10);
      }
    // d = 2 factorization
    const SectorTime z{cplx(1.0, 0.5), 1.0};
    const cplx full = heat_kernel_halfspace(z, {0.7, 0.3}, {1.1, -0.4}, NEU);
    const cplx fact = (heat_kernel_free(z, {0.7 - 1.1}) + heat_kernel_free(z, {0.7 + 1.1})) *
                      heat_kernel_free(z, {0.3 + 0.4});
    CHECK(std::abs(full - fact) <= 1e-15);
  }

  TEST_CASE("sector guard") {
    CHECK(throws_code([] { SectorTime(cplx(1, 2), 1.0).validate(); }, ErrorCode::SectorViolation));
    CHECK(throws_code([] { SectorTime(cplx(-1, 0), 1.0).validate(); }, ErrorCode::SectorViolation));
    CHECK(throws_code([] { SectorTime(cplx(1, 0), 2.0).validate(); }, ErrorCode::SectorViolation));
    CHECK(throws_code([] { apply_semigroup(DIR, SectorTime(cplx(1, 1), 0.7), odd_gauss()); },
                      ErrorCode::SectorViolation));
    SectorTime(cplx(1, 1), 0.8).validate();
  }

  TEST_CASE("closed-form Gaussian flows, real and complex time") {
    const Field td = apply_semigroup(DIR, SectorTime::real(1), odd_gauss());
    const Field tn = apply_semigroup(NEU, SectorTime::real(3), even_gauss());
    double ed = 0, en = 0;
    for (double x : sample_grid()) {
      const double a = std::pow(2.0, -1.5) * x * std::exp(-x * x / 8);
      const double b = 0.5 * std::exp(-x * x / 16);
      ed = std::max(ed, std::abs(td.eval(x).real() - a) / a);
      en = std::max(en, std::abs(tn.eval(x).real() - b) / b);
    }
    CHECK(ed <= 1e-8);
    CHECK(en <= 1e-8);
    for (cplx z : {cplx(0.5, 0.4), cplx(2.0, -1.5), cplx(0.05, 0.04)}) {
      const SectorTime s{z, 1.0};
      const Field a = apply_semigroup(DIR, s, odd_gauss()), b = apply_semigroup(NEU, s, even_gauss());
      double e = 0;
      for (double x : sample_grid()) {
        e = std::max(e, std::abs(a.eval(x) - odd_flow(z, x)) / std::abs(odd_flow(z, 1.0)));
        e = std::max(e, std::abs(b.eval(x) - even_flow(z, x)) / std::abs(even_flow(z, 0.0)));
        // derivatives land on the kernel
        const cplx d1 = std::pow(1.0 + z, -1.5) * (1.0 - x * x / (2.0 * (1.0 + z))) *
                        std::exp(-x * x / (4.0 * (1.0 + z)));
        e = std::max(e, std::abs(a.eval(x, 1) - d1) / std::abs(odd_flow(z, 1.0)));
      }
      CHECK(e <= 1e-9);
    }
  }

  TEST_CASE("strong continuity at t = 0") {
    const Field f = Field::axial(x_pow_exp(2, 1.0));
    std::vector<double> res;
    for (double t : {1e-2, 1e-3, 1e-4})
      res.push_back(sup_diff(apply_semigroup(DIR, SectorTime::real(t), f), f, sample_grid()));
    CHECK(res[1] < res[0]);
    CHECK(res[2] < res[1]);
    CHECK(res[2] <= 1e-3);
  }

  TEST_CASE("semigroup law") {
    const std::vector<Field> battery = {odd_gauss(), Field::axial(x_pow_exp(2, 1.0)),
                                        Field::axial(zeta_cutoff()), Field::axial(bump(1.5, 0.8))};
    double worst = 0;
    for (Boundary bc : {DIR, NEU})
      for (const auto& f : battery)
        for (double t : {0.25, 0.5, 1.0})
          for (double s : {0.25, 0.5, 1.0}) {
            const Field a = apply_semigroup(bc, SectorTime::real(t), apply_semigroup(bc, SectorTime::real(s), f));
            const Field b = apply_semigroup(bc, SectorTime::real(t + s), f);
            worst = std::max(worst, sup_diff(a, b, sample_grid()));
          }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("boundary conditions and Neumann mass") {
    for (const Field& f : {Field::axial(zeta_cutoff()), Field::axial(x_pow_exp(0, 1.0)),
                           Field::axial(bump(1.0, 0.6))}) {
      for (double t : {0.1, 1.0}) {
        const Field d = apply_semigroup(DIR, SectorTime::real(t), f);
        const Field n = apply_semigroup(NEU, SectorTime::real(t), f);
        CHECK(std::abs(trace(d, 0).value()) <= 1e-8);
        CHECK(std::abs(trace(n, 1, 1e-6).value()) <= 1e-6);
      }
    }
    // ∫ T_Neu(t) e^{-x} dx = 1
    const Field f = Field::axial(x_pow_exp(0, 1.0));
    for (double t : {0.1, 1.0, 5.0}) {
      const Field u = apply_semigroup(NEU, SectorTime::real(t), f);
      BatchReal F = [&](const std::vector<double>& x, std::vector<double>& out) {
        out.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = u.eval(x[i]).real();
      };
      HalfLineProblem prob;
      prob.extent = u.extent();
      prob.scale = u.scale();
      CHECK(std::abs(integrate_halfline(F, prob, {}).value - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("tangential factors evolve in closed form") {
    const Field f = Field::separable(odd_gauss().terms()[0].axial, {Tangential1D::gaussian(0.5)});
    const Field u = apply_semigroup(DIR, SectorTime::real(1), f);
    for (double x : {0.3, 1.0, 2.5})
      for (double y : {-1.0, 0.0, 0.7}) {
        const double g = std::exp(-y * y / 6.0) / std::sqrt(6.0 * M_PI);
        CHECK(std::abs(u.eval(x, std::vector<double>{y}) - odd_flow(1.0, x) * g) <= 1e-10);
      }
  }

  TEST_CASE("analytic in z: Cauchy-Riemann residual") {
    const Field f = Field::axial(zeta_cutoff());
    const double x0 = 0.6, h = 1e-3;
    for (cplx z : {cplx(1, 0.3), cplx(0.4, -0.2)}) {
      auto F = [&](cplx w) { return apply_semigroup(NEU, SectorTime{w, 1.2}, f).eval(x0); };
      const cplx dx = (F(z + h) - F(z - h)) / (2 * h);
      const cplx dy = (F(z + cplx(0, h)) - F(z - cplx(0, h))) / (2 * h);
      CHECK(std::abs(dx - dy / cplx(0, 1)) <= 1e-6);
    }
  }

  TEST_CASE("generator residual decays linearly") {
    const Field f = odd_gauss();
    const double r2 = generator_residual(DIR, f, 1e-2), r3 = generator_residual(DIR, f, 1e-3);
    CHECK(r3 <= 10 * r2 / 10);
    CHECK(r3 / r2 == doctest::Approx(0.1).epsilon(0.1));
    CHECK(generator_residual(NEU, Field::zero(1), 1e-3) == 0.0);
    // e^{-x²/4}: ΔT(h)f - Δf = O(h) as well
    CHECK(generator_residual(NEU, even_gauss(), 1e-4) <= 2e-4);
  }

  TEST_CASE("log-log fit") {
    std::vector<double> t = log_grid(10, 1e4, 12), y;
    for (double v : t) y.push_back(3 * std::pow(v, 0.4));
    const ExponentFit f = fit_loglog(t, y);
    CHECK(f.slope == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    std::vector<double> noisy;
    for (std::size_t i = 0; i < t.size(); ++i) noisy.push_back(std::pow(t[i], 0.1) * (i % 2 ? 4.0 : 0.25));
    CHECK(throws_code([&] { fit_loglog(t, noisy); }, ErrorCode::FitRejected));
    CHECK(throws_code([&] { fit_loglog(log_grid(1, 10, 12), y); }, ErrorCode::InvalidArgument));
    CHECK(throws_code([&] { fit_loglog(log_grid(1, 1e3, 5), std::vector<double>(5, 1.0)); },
                      ErrorCode::InvalidArgument));
  }

  TEST_CASE("rate functions") {
    RateFunction g{RateFunction::g, 2, 3, 0.5, 0};
    CHECK(g(cplx(0.25)) == doctest::Approx(1 + 0.25 * 0 + std::pow(0.25, -1.0)));
    g.gamma = 1.5;
    CHECK(g(cplx(0.25)) == doctest::Approx(1 + std::pow(0.25, -1.5)));
    RateFunction h{RateFunction::h, 2, 1, 2.5, 0.1};
    CHECK(h.exponent() == doctest::Approx(1.6 / 4));
    h.gamma = 0.5;
    CHECK(h(cplx(1e-3)) == 1.0);
    CHECK(growth_exponent(DIR, {2, 1, 2.5, 1}) == doctest::Approx(0.375));
    CHECK(growth_exponent(NEU, {2, 0, 1.5, 1}) == doctest::Approx(0.125));
    CHECK(growth_exponent(DIR, {2, 0, 1.5, 1}) == 0.0);
  }

  TEST_CASE("growth exponents") {
    const auto grid = log_grid(10, 1e4, 12);
    struct Case {
      Boundary bc;
      SpaceParams sp;
      double slope, tol;
    };
    for (const Case& c : {Case{DIR, {2, 1, 2.5, 1}, 0.375, 0.05}, Case{NEU, {2, 0, 1.5, 1}, 0.125, 0.05},
                          Case{DIR, {2, 0, 1.5, 1}, 0.0, 0.03}}) {
      const auto t0 = std::chrono::steady_clock::now();
      const GrowthResult r = growth_experiment(c.bc, c.sp, grid);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      MESSAGE("slope " << r.fit.slope << " r2 " << r.fit.r_squared << " envelope " << r.used_envelope
                       << " in " << secs << " s");
      CHECK(std::abs(r.fit.slope - c.slope) <= c.tol);
      CHECK(r.fit.r_squared >= 0.98);
      CHECK(r.expected == doctest::Approx(c.slope));
    }
  }

  TEST_CASE("blow-up probe") {
    for (Boundary bc : {DIR, NEU}) {
      const double gamma = bc == DIR ? 3.0 : 1.0;
      const BlowupResult r = blowup_probe(bc, 2, gamma, 1.0, 6, 0.25);
      REQUIRE(r.partial.size() == 6);
      for (std::size_t j = 1; j < 6; ++j) CHECK(r.partial[j] > r.partial[j - 1]);
      CHECK(r.diverges);
      CHECK(r.min_growth >= 2.0);
      CHECK(r.norm_converged);
      CHECK(std::isfinite(r.norm));
    }
    CHECK(throws_code([] { blowup_probe(DIR, 2, 2.0, 1, 6, 0.25); }, ErrorCode::HypothesisViolated));
    // the same inputs break the quadrature of the semigroup itself
    auto fd = std::make_shared<LogSingular>(2.0, 0.75);
    CHECK(throws_code([&] { apply_semigroup(DIR, SectorTime::real(1), Field::axial(fd)); },
                      ErrorCode::QuadratureDiverged));
    auto fn = std::make_shared<LogSingular>(1.0, 0.75);
    CHECK(throws_code([&] { apply_semigroup(NEU, SectorTime::real(1), Field::axial(fn)); },
                      ErrorCode::QuadratureDiverged));
    // an integrable singularity goes through
    auto fok = std::make_shared<LogSingular>(0.5, 0.75);
    CHECK(std::isfinite(apply_semigroup(NEU, SectorTime::real(1), Field::axial(fok)).eval(0.25).real()));
    // ∫_0^{1/2} y^{-1}|log y|^{-3/4} diverges, exponent 2 converges to 1/log 2
    const auto dv = log_integral_partials(0.75, 8, 81, 6);
    const auto cv = log_integral_partials(2.0, 8, 81, 6);
    for (std::size_t j = 1; j < dv.size(); ++j) CHECK(dv[j] >= 2 * dv[j - 1]);
    CHECK(cv.back() == doctest::Approx(1 / std::log(2.0)).epsilon(1e-9));
  }

  TEST_CASE("kernel sector bounds") {
    const auto tg = log_grid(0.01, 100, 9);
    std::vector<double> xy = log_grid(1e-3, 30, 40);
    CHECK(kernel_sector_bound_check(DIR, 0.0, tg, xy).ratio == 1.0);
    CHECK(kernel_sector_bound_check(NEU, 0.0, tg, xy).ratio == 1.0);
    // the polar-form magnitude agrees with direct complex evaluation of the kernel
    const cplx z = std::polar(0.7, M_PI / 4);
    const double direct = std::abs(heat_kernel_halfspace(SectorTime{z, 1.0}, 0.9, 0.4, DIR));
    const double one = kernel_sector_bound_check(DIR, M_PI / 4, {0.7}, {0.4, 0.9}).ratio;
    (void)one;
    const double polar = std::exp(-std::cos(M_PI / 4) * 0.25 / 2.8) / std::sqrt(4 * M_PI * 0.7) *
                         std::abs(1.0 - std::exp(-std::polar(0.36 / 0.7, -M_PI / 4)));
    CHECK(direct == doctest::Approx(polar).epsilon(1e-13));
    const SectorBound d = kernel_sector_bound_check(DIR, M_PI / 4, tg, xy);
    CHECK(d.ratio <= std::sqrt(2.0) + 1e-10);
    CHECK(d.ratio >= 1.0);
    CHECK(d.normalized_ratio <= d.normalized_bound + 1e-10);
    const SectorBound n = kernel_sector_bound_check(NEU, M_PI / 3, tg, xy);
    CHECK(n.ratio <= 1.0 + 1e-10);
    CHECK(n.normalized_ratio <= n.normalized_bound + 1e-10);
  }
}
