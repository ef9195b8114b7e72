#include <cmath>

#include "core/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "kernels/semigroup.hpp"
#include "regularity/regularity.hpp"
#include "resolvent/resolvent.hpp"

using namespace hsl;
using testing_util::throws_code;

namespace {

const Boundary DIR = Boundary::dirichlet, NEU = Boundary::neumann;

double max_rel(const Field& a, const Field& b, int m = 0) {
  double e = 0, n = 0;
  for (double x = 0.0; x < 8.0; x += 0.173) {
    e = std::max(e, std::abs(a.eval(x, m) - b.eval(x, m)));
    n = std::max(n, std::abs(b.eval(x, m)));
  }
  return e / n;
}

// T(t) of x e^{-qx²} (Dirichlet) and e^{-qx²} (Neumann) in closed form: Gaussians stay Gaussians
Field heat_gauss(Boundary bc, double q, double t) {
  const double s = 1.0 / (4.0 * q), r = s / (s + t);
  const double qt = 1.0 / (4.0 * (s + t));
  return bc == DIR ? Field::axial(x_pow_gauss(1, qt, std::pow(r, 1.5))) : Field::axial(x_pow_gauss(0, qt, std::sqrt(r)));
}

std::vector<cplx> sector_grid(const std::vector<double>& moduli) {
  std::vector<cplx> g;
  for (double m : moduli)
    for (double a : {0.0, 3 * M_PI / 4}) g.push_back(std::polar(m, a));
  return g;
}

}  // namespace

TEST_SUITE("regularity_suite") {
  TEST_CASE("elliptic solve: closed forms, residual, boundary condition, uniqueness") {
    const Field f = Field::axial(exp_decay(1.0));
    const Field ud = Field::axial(exp_poly({{0.5, 1, 1.0}}));
    const Field un = Field::axial(exp_poly({{0.5, 1, 1.0}, {0.5, 0, 1.0}}));
    const Field a = elliptic_solve(DIR, 1.0, f), b = elliptic_solve(NEU, 1.0, f);
    for (int k : {0, 1, 2}) {
      CHECK(max_rel(a, ud, k) <= 1e-8);
      CHECK(max_rel(b, un, k) <= 1e-8);
    }
    // the transform route needs data whose reflection is smooth
    EllipticOptions tr;
    tr.method = EllipticMethod::transform;
    for (const auto& [bc, g] : {std::pair{DIR, Field::axial(x_pow_gauss(1, 1.0))}, std::pair{NEU, Field::axial(x_pow_gauss(0, 1.0))},
                                std::pair{DIR, Field::axial(bump(1.5, 0.8))}})
      for (cplx lam : {cplx(1.0), std::polar(0.3, 2.0)})
        for (int k : {0, 1, 2}) CHECK(max_rel(elliptic_solve(bc, lam, g, tr), elliptic_solve(bc, lam, g), k) <= 1e-8);
    const std::vector<Field> bat{Field::axial(bump(1.0, 0.5)), Field::axial(x_pow_gauss(1, 1.0)),
                                 Field::axial(zeta_cutoff())};
    for (Boundary bc : {DIR, NEU})
      for (cplx lam : {cplx(1.0), std::polar(0.1, 2.0), std::polar(30.0, -2.2)})
        for (const auto& g : bat) {
          const Field u = elliptic_solve(bc, lam, g);
          CHECK(resolvent_residual(lam, u, g, 2.0, 0.0) <= 1e-6 * weighted_lp_norm(g, 2.0, 0.0, {}));
          CHECK(std::abs(u.eval(0.0, bc == DIR ? 0 : 1)) <= 1e-6);
          EllipticOptions o;
          o.nodes = 24;
          CHECK(max_rel(elliptic_solve(bc, lam, g, o), u, 2) <= 1e-8);
        }
    CHECK(throws_code([&] { elliptic_solve(DIR, -1.0, f); }, ErrorCode::BranchCut));
    CHECK(parse_elliptic_method("transform") == EllipticMethod::transform);
    CHECK(throws_code([] { parse_elliptic_method("fem"); }, ErrorCode::InvalidArgument));
  }

  TEST_CASE("elliptic regularity ratios against g and h") {
    const RateFunction g{RateFunction::g, 2, 1, 2.5, 0};
    CHECK(g(1.0) == doctest::Approx(2.0));
    const std::vector<Field> bat{Field::axial(bump(1.0, 0.5)), Field::axial(x_pow_gauss(1, 1.0))};
    {
      const auto rep = elliptic_regularity_check(DIR, {2, 1, 2.5, 1}, sector_grid(log_grid(1e-2, 1e2, 9)), bat);
      CHECK(rep.entries.size() == 36);
      CHECK(rep.h_applies);
      CHECK(rep.h_exponent == doctest::Approx(0.4));
      CHECK(std::isfinite(rep.C));
      CHECK(rep.ratio_over_g_slope >= -0.05);
      CHECK(rep.fitted_exponent <= rep.h_exponent + 0.05);
      // the tail e^{-Re√λ x} under the weight x^{γ+kp}: rotating to 3π/4 costs up to cos(3π/8)^{-(γ+kp+1)/p} ≈ 14.1
      CHECK(rep.rotation_spread <= std::pow(std::cos(3 * M_PI / 8), -5.5 / 2));
      MESSAGE("(2,1,2.5) Dir: C=" << rep.C << " exponent=" << rep.fitted_exponent << " spread=" << rep.rotation_spread);
    }
    {
      const auto rep = elliptic_regularity_check(DIR, {2, 0, 0.5, 1}, sector_grid(log_grid(1e-2, 1e2, 5)), bat);
      CHECK_FALSE(rep.h_applies);
      for (const auto& e : rep.entries) CHECK(e.g == doctest::Approx(2.0));
      CHECK(std::isfinite(rep.C));
      CHECK(rep.fitted_exponent <= 0.05);
      CHECK(rep.rotation_spread <= 10.0);
    }
    {
      const auto rep = elliptic_regularity_check(NEU, {2, 0, 0.5, 1}, sector_grid(log_grid(1e-2, 1e2, 5)), bat);
      CHECK(std::isfinite(rep.C));
      CHECK(rep.rotation_spread <= 10.0);
    }
  }

  TEST_CASE("homogeneous scaling") {
    const Field f = Field::axial(bump(1.0, 0.5));
    for (Boundary bc : {DIR, NEU}) {
      const auto rep = homogeneous_scaling_check(bc, {2, 1, 0.5, 1}, {1, 2, 4, 8}, 1.0, f);
      REQUIRE(rep.entries.size() == 4);
      CHECK(rep.max_residual <= 1e-6);
      CHECK(rep.ratio_spread <= 2.0);
      // r = 1 is the unscaled problem
      const Field u = elliptic_solve(bc, 1.0, f);
      CHECK(rep.entries[0].residual ==
            doctest::Approx(resolvent_residual(1.0, u, f, 2, 0.5, {}) / weighted_lp_norm(f, 2, 0.5, {})));
    }
  }

  TEST_CASE("Duhamel: manufactured solution, zero datum, linearity, integrated identity") {
    for (Boundary bc : {DIR, NEU}) {
      const Field psi = Field::axial(x_pow_gauss(bc == DIR ? 1 : 0, 1.0));
      const Field lpsi = psi.laplacian();
      TimeField f{{{[](double t) { return cplx(std::exp(-t)); }, psi + lpsi},
                   {[](double) { return cplx(-1.0); }, lpsi}}};
      const std::vector<double> ts{0.25, 0.5, 1.0};
      const auto sol = duhamel_solve(bc, f, ts);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        CHECK(max_rel(sol.u[i], psi.scaled(1 - std::exp(-t))) <= 1e-5);
        CHECK(max_rel(sol.dt[i], psi.scaled(std::exp(-t))) <= 1e-5);
        CHECK(max_rel(sol.lap[i], lpsi.scaled(1 - std::exp(-t))) <= 1e-5);
      }
      CHECK(duhamel_integrated_residual(bc, f, 1.0, sol.u[2], {0.2, 0.7, 1.3}) <= 1e-6);
    }
    // zero datum
    const auto z = duhamel_solve(DIR, TimeField{{{[](double) { return cplx(1.0); }, Field::zero(1)}}}, {0.5});
    CHECK(z.u[0].is_zero());
    // linearity
    const TimeField f1 = TimeField::exponential(1.0, Field::axial(bump(1.0, 0.5)));
    const TimeField f2 = TimeField::exponential(0.3, Field::axial(x_pow_gauss(1, 2.0)), 2.0);
    TimeField f12 = f1;
    f12.terms.push_back(f2.terms[0]);
    const auto s1 = duhamel_solve(DIR, f1, {0.7}), s2 = duhamel_solve(DIR, f2, {0.7}), s12 = duhamel_solve(DIR, f12, {0.7});
    CHECK(max_rel(s12.u[0], s1.u[0] + s2.u[0]) <= 1e-8);
    // a two-node rule without room to refine
    DuhamelOptions bad;
    bad.panels = 1;
    bad.nodes = 2;
    bad.grading = 0;
    bad.max_halvings = 1;
    bad.tol = 1e-14;
    CHECK(throws_code([&] { duhamel_solve(DIR, f1, {1.0}, bad); }, ErrorCode::TimeStepNotConverged));
  }

  TEST_CASE("maximal regularity with power time weights") {
    const SpaceParams sp{2, 0, 0.5, 1};
    const std::vector<TimeField> bat{TimeField::exponential(1.0, Field::axial(bump(1.0, 0.5))),
                                     TimeField::exponential(1.0, Field::axial(x_pow_gauss(1, 1.0)))};
    for (const TimeWeight& tw : {TimeWeight{0.0, 2.0}, TimeWeight{0.5, 2.0}, TimeWeight{1.0, 3.0}}) {
      // full battery at η = 0, the bump alone for the other weights
      const auto rep = maximal_regularity_check(DIR, sp, tw, 1.0, tw.eta == 0.0 ? bat : std::vector<TimeField>{bat[0]});
      REQUIRE(rep.entries.size() == (tw.eta == 0.0 ? 2u : 1u));
      CHECK(std::isfinite(rep.C));
      CHECK(rep.C > 0);
      CHECK(rep.max_change <= 1.5);
      MESSAGE("eta=" << tw.eta << " q=" << tw.q << " C=" << rep.C << " change=" << rep.max_change);
    }
    const auto vac = maximal_regularity_check(DIR, sp, {0.0, 2.0}, 1.0,
                                              {TimeField{{{[](double) { return cplx(1.0); }, Field::zero(1)}}}});
    CHECK(vac.vacuous);
    CHECK(vac.entries.empty());
    CHECK(throws_code([&] { TimeWeight{1.0, 2.0}.validate(); }, ErrorCode::InvalidArgument));
    CHECK(throws_code([&] { TimeWeight{-1.0, 2.0}.validate(); }, ErrorCode::InvalidArgument));
  }

  TEST_CASE("weak setting: reductions and splitting independence") {
    const Field phi = Field::axial(bump(1.5, 1.0));
    const double q0 = 0.7;
    for (const SectorTime& z : {SectorTime::real(0.4), SectorTime::polar(0.4, 0.3, 1.0)}) {
      const double t = z.z.real();
      // (f0, 0): strong pairing against a closed-form flow (real times only)
      const WeakDatum w0{{Field::axial(x_pow_gauss(1, q0)), Field::zero(1)}};
      const auto r0 = weak_setting_apply(z, w0, phi);
      if (z.z.imag() == 0.0) CHECK(std::abs(r0.value - pairing(heat_gauss(DIR, q0, t), phi)) <= 1e-9);
      // (0, f1): -<T_Neu f1, ∂1 φ>
      const WeakDatum w1{{Field::zero(1), Field::axial(x_pow_gauss(0, q0))}};
      const auto r1 = weak_setting_apply(z, w1, phi);
      if (z.z.imag() == 0.0)
        CHECK(std::abs(r1.value + pairing(heat_gauss(NEU, q0, t), phi.derivative({1, 0, 0}))) <= 1e-9);
      // g = ∂1 G with G compactly supported: (g, 0) and (g - ∂1 G, G)
      const AxialPtr g = std::make_shared<SumAxial>(std::vector<cplx>{1.0, -1.0},
                                                    std::vector<AxialPtr>{bump(1.0, 0.4), bump(2.0, 0.4)});
      const Field G = Field::axial(std::make_shared<Antiderivative>(g));
      const Field gf = Field::axial(g);
      const auto a = weak_setting_apply(z, {{gf, Field::zero(1)}}, phi);
      const auto b = weak_setting_apply(z, {{gf - G.derivative({1, 0, 0}), G}}, phi);
      CHECK(std::abs(a.value - b.value) <= 1e-6 * std::abs(a.value));
      // linearity in the datum and in φ
      const Field phi2 = Field::axial(bump(2.5, 0.7));
      const auto s = weak_setting_apply(z, {{w0.components[0], w1.components[1]}}, phi + phi2.scaled(2.0));
      const cplx sum = r0.value + r1.value + 2.0 * (weak_setting_apply(z, w0, phi2).value + weak_setting_apply(z, w1, phi2).value);
      CHECK(std::abs(s.value - sum) <= 1e-12 * std::abs(sum));
    }
    // d = 2: a(x1) ∂2 b(x2) as (g, 0, 0) and (0, 0, a b)
    {
      const SectorTime z = SectorTime::real(0.3);
      const AxialPtr a = bump(1.2, 0.6);
      const Field ab = Field::separable(a, {Tangential1D::gaussian(0.5)});
      const Field g = Field::separable(a, {Tangential1D::gaussian(0.5, 1.0, 1)});
      const Field phi2 = Field::separable(bump(1.5, 1.0), {Tangential1D::gaussian(0.8, 1.0, 0)});
      const Field phi2s = Field::separable(bump(1.5, 1.0), {Tangential1D::gaussian(0.8, 1.0, 1)});
      const Field test = phi2 + phi2s;
      const auto x = weak_setting_apply(z, {{g, Field::zero(2), Field::zero(2)}}, test);
      const auto y = weak_setting_apply(z, {{Field::zero(2), Field::zero(2), ab}}, test);
      CHECK(std::abs(x.value) > 1e-3);
      CHECK(std::abs(x.value - y.value) <= 1e-6 * std::abs(x.value));
    }
    const WeakDatum w{{Field::axial(bump(1.0, 0.5)), Field::axial(bump(2.0, 0.5))}};
    CHECK(weak_representation_norm(w, 2, 0) > 0);
    CHECK(throws_code([&] { WeakDatum{{Field::zero(1)}}.dim(); }, ErrorCode::InvalidArgument));
  }
}
