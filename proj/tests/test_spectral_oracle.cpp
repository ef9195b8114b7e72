#include <cmath>

#include "core/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "kernels/semigroup.hpp"
#include "oracle/spectral.hpp"

using namespace hsl;
using testing_util::throws_code;

namespace {

const Boundary DIR = Boundary::dirichlet, NEU = Boundary::neumann;

std::vector<double> grid() {
  std::vector<double> g;
  for (double x = 0.03; x < 9.0; x += 0.21) g.push_back(x);
  return g;
}

double max_rel(const Field& a, const Field& b, int m = 0) {
  double e = 0, n = 0;
  for (double x : grid()) {
    e = std::max(e, std::abs(a.eval(x, m) - b.eval(x, m)));
    n = std::max(n, std::abs(b.eval(x, m)));
  }
  return e / n;
}

// fields whose transforms decay like Gaussians
std::vector<Field> smooth_battery(Boundary bc) {
  if (bc == DIR)
    return {Field::axial(x_pow_gauss(1, 0.25)), Field::axial(x_pow_gauss(3, 0.5)),
            Field::axial(exp_poly({{1.0, 1, 0.0, 0.3}, {-0.5, 1, 0.0, 1.0}}))};
  return {Field::axial(x_pow_gauss(0, 0.25)), Field::axial(x_pow_gauss(2, 0.5)),
          Field::axial(exp_poly({{1.0, 0, 0.0, 0.3}, {0.7, 2, 0.0, 1.0}}))};
}

// six fields, including algebraically decaying transforms
std::vector<Field> battery() {
  return {Field::axial(x_pow_gauss(1, 0.25)), Field::axial(x_pow_gauss(0, 0.25)),
          Field::axial(x_pow_exp(2, 1.0)),    Field::axial(x_pow_exp(0, 1.5)),
          Field::axial(zeta_cutoff()),        Field::axial(bump(1.2, 0.7))};
}

}  // namespace

TEST_SUITE("spectral_oracle") {
  TEST_CASE("transform values") {
    const Field e = Field::axial(exp_decay(1.0));
    CHECK(oracle_transform(e, TransformMode::sine, {1.0})[0].real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(oracle_transform(e, TransformMode::cosine, {0.0})[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(oracle_transform(Field::zero(1), TransformMode::sine, {0.3, 2.0})[1] == cplx(0.0));
    // numerical path: Gaussian moments
    const auto s = oracle_transform(Field::axial(x_pow_gauss(1, 0.25)), TransformMode::sine, {0.5, 1.7, 4.0});
    const auto c = oracle_transform(Field::axial(x_pow_gauss(0, 0.25)), TransformMode::cosine, {0.5, 1.7, 4.0});
    int i = 0;
    for (double xi : {0.5, 1.7, 4.0}) {
      CHECK(std::abs(s[i].real() - 2 * std::sqrt(M_PI) * xi * std::exp(-xi * xi)) <= 1e-13);
      CHECK(std::abs(c[i].real() - std::sqrt(M_PI) * std::exp(-xi * xi)) <= 1e-13);
      ++i;
    }
    // closed form against the numeric path on a shifted copy (bump far from 0 uses quadrature)
    const auto a = oracle_transform(Field::axial(x_pow_exp(2, 1.0)), TransformMode::sine, {0.7, 3.0});
    for (int k = 0; k < 2; ++k) {
      const double xi = k == 0 ? 0.7 : 3.0;
      const cplx ref = (std::pow(cplx(1, -xi), -3.0) - std::pow(cplx(1, xi), -3.0)) / cplx(0, 1);
      CHECK(std::abs(a[k] - ref) <= 1e-14);
    }
  }

  TEST_CASE("round trip and Parseval") {
    for (Boundary bc : {DIR, NEU})
      for (const Field& f : smooth_battery(bc)) {
        const Field u = oracle_function_calculus(bc, [](double) { return cplx(1.0); }, 0.0, f);
        double e = 0;
        for (double x : grid()) e = std::max(e, std::abs(u.eval(x) - f.eval(x)));
        CHECK(e <= 1e-8);
        const double l2 = std::pow(weighted_lp_norm(f, 2, 0, {}), 2);
        CHECK(oracle_parseval(f, mode_for(bc)) == doctest::Approx(l2).epsilon(1e-6));
      }
    // e^{-x} has a 1/ξ sine tail: the identity multiplier cannot be truncated
    CHECK(throws_code([] { oracle_function_calculus(DIR, [](double) { return cplx(1.0); }, 0.0,
                                                    Field::axial(exp_decay(1.0))); },
                      ErrorCode::AliasWarning));
  }

  TEST_CASE("Green resolvent: closed forms, PDE, boundary") {
    const Field f = Field::axial(exp_decay(1.0));
    const Field ud = oracle_resolvent(DIR, 1.0, f), un = oracle_resolvent(NEU, 1.0, f);
    double ed = 0, en = 0;
    for (double x : grid()) {
      const double a = 0.5 * x * std::exp(-x), b = 0.5 * (x + 1) * std::exp(-x);
      ed = std::max(ed, std::abs(ud.eval(x) - a) / a);
      en = std::max(en, std::abs(un.eval(x) - b) / b);
    }
    CHECK(ed <= 1e-8);
    CHECK(en <= 1e-8);
    CHECK(std::abs(ud.eval(0.0)) <= 1e-8);
    CHECK(std::abs(un.eval(0.0, 1)) <= 1e-8);
    // λu - u'' = f with u'' from Richardson differences of u'
    for (cplx lam : {cplx(1.0), cplx(0.5, 2.0), cplx(-3.0, 0.5)})
      for (Boundary bc : {DIR, NEU}) {
        const Field g = Field::axial(x_pow_gauss(1, 0.3));
        const Field u = oracle_resolvent(bc, lam, g);
        for (double x : {0.4, 1.1, 2.7}) {
          auto d2 = [&](double h) { return (u.eval(x + h, 1) - u.eval(x - h, 1)) / (2 * h); };
          const cplx upp = (4.0 * d2(1e-3) - d2(2e-3)) / 3.0;
          CHECK(std::abs(lam * u.eval(x) - upp - g.eval(x)) <= 1e-8);
        }
      }
    CHECK(throws_code([&] { oracle_resolvent(DIR, -1.0, f); }, ErrorCode::BranchCut));
    CHECK(throws_code([&] { oracle_resolvent(NEU, 0.0, f); }, ErrorCode::BranchCut));
  }

  TEST_CASE("resolvent identity") {
    const Field f = Field::axial(x_pow_exp(1, 1.0));
    for (Boundary bc : {DIR, NEU}) {
      const Field lhs = oracle_resolvent(bc, 2.0, f) - oracle_resolvent(bc, 1.0, f);
      const Field rhs = oracle_resolvent(bc, 2.0, oracle_resolvent(bc, 1.0, f)).scaled(-1.0);
      double e = 0;
      for (double x : grid()) e = std::max(e, std::abs(lhs.eval(x) - rhs.eval(x)));
      CHECK(e <= 1e-8);
    }
  }

  TEST_CASE("semigroup symbol reproduces the quadrature semigroup") {
    for (Boundary bc : {DIR, NEU})
      for (const Field& f : battery())
        for (double t : {0.1, 1.0}) {
          const Field a = oracle_function_calculus(bc, [t](double s) { return cplx(std::exp(-t * s)); }, 0.0, f);
          const Field b = apply_semigroup(bc, SectorTime::real(t), f);
          CHECK(max_rel(a, b) <= 1e-6);
        }
  }

  TEST_CASE("rational and composed symbols") {
    for (Boundary bc : {DIR, NEU})
      for (const Field& f : smooth_battery(bc)) {
        const Field a = oracle_function_calculus(bc, [](double s) { return cplx(1.0 / (1.0 + s)); }, 1.0, f);
        CHECK(max_rel(a, oracle_resolvent(bc, 2.0, f)) <= 1e-8);
      }
    // φ(s) = s e^{-s} with A = 1-Δ_Dir against e^{-1}(1-Δ)T(1)u
    for (const Field& u : {Field::axial(x_pow_gauss(1, 0.25)), Field::axial(zeta_cutoff())}) {
      const Field a = oracle_function_calculus(DIR, [](double s) { return cplx(s * std::exp(-s)); }, 1.0, u);
      const Field v = apply_semigroup(DIR, SectorTime::real(1), u);
      const Field b = (v - v.laplacian()).scaled(std::exp(-1.0));
      CHECK(max_rel(a, b) <= 1e-6);
    }
  }

  TEST_CASE("multiplicativity and symbol guard") {
    auto phi = [](double s) { return cplx(1.0 / (1.0 + s)); };
    auto psi = [](double s) { return cplx(std::exp(-0.3 * s)); };
    for (Boundary bc : {DIR, NEU})
      for (const Field& f : smooth_battery(bc)) {
        const Field both = oracle_function_calculus(bc, [&](double s) { return phi(s) * psi(s); }, 0.5, f);
        const Field chain = oracle_function_calculus(bc, psi, 0.5, oracle_function_calculus(bc, phi, 0.5, f));
        double e = 0;
        for (double x : grid()) e = std::max(e, std::abs(both.eval(x) - chain.eval(x)));
        CHECK(e <= 1e-8);
      }
    CHECK(throws_code([] { oracle_function_calculus(DIR, [](double s) { return cplx(std::exp(s)); }, 0.0,
                                                    Field::axial(x_pow_gauss(1, 0.25))); },
                      ErrorCode::UnboundedSymbol));
  }
}
