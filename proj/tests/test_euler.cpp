#include <doctest.h>

#include <cmath>
#include <random>

#include "fuchsol/div_b.hpp"
#include "fuchsol/euler.hpp"
#include "fuchsol/structural.hpp"

using namespace fuchsol;
using namespace fuchsol::euler;

TEST_CASE("kasner exponents") {
  auto p = kasner_exponents(1.0);
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(0.0));
  CHECK(p[2] == doctest::Approx(1.0));
  p = kasner_exponents(0.0);
  CHECK(p[0] == doctest::Approx(-1.0 / 3.0));
  CHECK(p[1] == doctest::Approx(2.0 / 3.0));
  CHECK(p[2] == doctest::Approx(2.0 / 3.0));
  for (double K : {0.0, 1.0, 3.0}) {
    auto q = kasner_exponents(K);
    CHECK(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q[0] + q[1] + q[2] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("big gamma") {
  CHECK(big_gamma(1.0, 4.0 / 3.0) == doctest::Approx(1.0 / 3.0));
  for (double K : {0.0, 1.0, 2.5}) CHECK(big_gamma(K, 2.0) == doctest::Approx(1.0));
  CHECK(big_gamma(3.0, 4.0 / 3.0) == doctest::Approx(-1.0));
  KasnerParams out_of_regime{3.0, 4.0 / 3.0};
  CHECK(!out_of_regime.in_regime());
  KasnerParams ok{1.0, 4.0 / 3.0};
  CHECK(ok.in_regime());
}

TEST_CASE("fluid observables") {
  const double g = 4.0 / 3.0;
  auto o = observables(1.0, g);
  CHECK(o.pressure == doctest::Approx(1.0));
  CHECK(o.density == doctest::Approx(3.0));
  o = observables(4.0, g);
  CHECK(o.pressure == doctest::Approx(1.0 / 16.0));
  for (double vsq : {0.5, 1.0, 7.0})
    CHECK(observables(vsq, g).pressure / observables(vsq, g).density ==
          doctest::Approx(g - 1.0));
  CHECK_THROWS_AS(observables(-1.0, g), DomainError);
}

TEST_CASE("physical coefficients at the rest point") {
  KasnerParams params{1.0, 4.0 / 3.0};
  auto c = physical_coeffs(-1.0, 1.0, 0.0, params);
  CHECK(c.b0(0, 0) == doctest::Approx(1.0));
  CHECK(c.b0(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(c.b0(0, 1) == 0.0);
  CHECK(c.b1(0, 0) == 0.0);
  CHECK(c.b1(0, 1) == doctest::Approx(-1.0 / 3.0));
  CHECK(c.b1(1, 0) == doctest::Approx(-1.0 / 3.0));
  CHECK(c.source(0) == doctest::Approx(-1.0 / 3.0));
  CHECK(c.source(1) == 0.0);
  CHECK(!c.degenerate);
  CHECK(physical_coeffs(-1.0, 1.0, 1.0, params).degenerate);
}

TEST_CASE("physical matrices are exactly symmetric") {
  KasnerParams params{0.5, 1.4};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double v0 = -1.0 + 0.3 * uni(rng), v1 = 0.3 * uni(rng);
    auto c = physical_coeffs(-0.5, v0, v1, params);
    CHECK((c.b0 - c.b0.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((c.b1 - c.b1.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("rest solution solves the physical system") {
  KasnerParams params{1.0, 4.0 / 3.0};
  for (double tau : {-1.0, -0.3, -1e-2})
    CHECK(rest_residual(params, 1.7, tau, 64) <= 1e-12);
}

TEST_CASE("perturbation transforms") {
  KasnerParams params{1.0, 4.0 / 3.0};
  EulerBackground bg;  // rest background, u_star = 0
  const double G = params.big_gamma();

  SUBCASE("rest background maps to zero") {
    PeriodicGrid grid(16, 2.0 * M_PI);
    FluidState vs;
    vs.params = params;
    vs.field = Field(grid, 2, -0.7);
    const double V0 = -std::pow(0.7, G);
    for (int j = 0; j < 16; ++j) vs.field.values(0, j) = V0;
    auto pert = to_perturbation(vs, bg);
    CHECK(pert.field.max_abs() <= 1e-14);
    CHECK(pert.field.time == doctest::Approx(-std::pow(0.7, G)));
  }
  SUBCASE("round trip is the identity") {
    PeriodicGrid grid(16, 2.0 * M_PI);
    PerturbationState ps;
    ps.params = params;
    ps.field = Field(grid, 2, -0.6);
    for (int j = 0; j < 16; ++j) {
      ps.field.values(0, j) = 0.05 * std::cos(grid.x(j));
      ps.field.values(1, j) = 0.02 * std::sin(grid.x(j));
    }
    auto back = to_perturbation(from_perturbation(ps, bg), bg);
    CHECK((back.field.values - ps.field.values).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(back.field.time == doctest::Approx(ps.field.time).epsilon(1e-14));
  }
  SUBCASE("explicit arithmetic at t = -1") {
    PeriodicGrid grid(8, 2.0 * M_PI);
    PerturbationState ps;
    ps.params = params;
    ps.field = Field(grid, 2, -1.0);
    ps.field.values.row(0).setConstant(0.1);
    auto fluid = from_perturbation(ps, bg);
    CHECK(fluid.field.values(0, 0) == doctest::Approx(-1.1));
    CHECK(fluid.field.values(1, 0) == 0.0);
  }
  SUBCASE("positivity violation aborts with location") {
    PeriodicGrid grid(8, 2.0 * M_PI);
    PerturbationState ps;
    ps.params = params;
    ps.field = Field(grid, 2, -1.0);
    ps.field.values.row(0).setConstant(-1.5);
    CHECK_THROWS_AS(from_perturbation(ps, bg), DomainError);
  }
}

TEST_CASE("fuchsian form of the fluid") {
  KasnerParams params{1.0, 4.0 / 3.0};
  EulerBackground bg;
  FuchsianSystem sys = fuchsian_form(bg, params);

  SUBCASE("Bc commutes with P for all v") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-0.04, 0.04);
    Matrix bc(2, 2);
    for (int i = 0; i < 100; ++i) {
      Vector v(2);
      v << uni(rng), uni(rng);
      sys.bc(-0.1, 0.3, v, bc);
      CHECK((sys.proj.p * bc - bc * sys.proj.p).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("B0 at the rest point approaches diag(1, gamma-1)") {
    Matrix b0(2, 2);
    sys.b0(-1e-6, 0.0, Vector::Zero(2), b0);
    CHECK(b0(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b0(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(std::abs(b0(0, 1)) <= 1e-12);
  }
  SUBCASE("P F2 vanishes identically") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uni(-0.04, 0.04);
    Vector f2(2);
    for (int i = 0; i < 50; ++i) {
      Vector v(2);
      v << uni(rng), uni(rng);
      sys.split->f_parts[2](-0.2, 1.0, v, f2);
      CHECK(f2(1) == 0.0);
    }
  }
  SUBCASE("rhs vanishes on the rest background") {
    PeriodicGrid grid(32, 2.0 * M_PI);
    Field zero(grid, 2, -0.5);
    Field r = rhs(sys, zero);
    CHECK(r.values.cwiseAbs().maxCoeff() <= 1e-12);
    zero.time = -1e-3;
    r = rhs(sys, zero);
    CHECK(r.values.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("F0 has a finite limit") {
    auto audit = audit_f0(sys);
    CHECK(audit.finite);
  }
  SUBCASE("split recomposition") {
    Vector v(2);
    v << 0.01, -0.02;
    for (double t : {-0.5, -0.1, -1e-3}) {
      auto r = split_residual(sys, t, 0.4, v);
      CHECK(r.b1_rel <= 1e-9);
      CHECK(r.f_rel <= 1e-9);
    }
  }
  SUBCASE("pointwise constants near the paper values") {
    auto samples = SampleSet::draw(sys, 400, 99);
    auto b = check_pointwise_bounds(sys, samples);
    CHECK(b.kappa == doctest::Approx(1.0).epsilon(0.2));
    CHECK(b.gamma1 == doctest::Approx(3.0).epsilon(0.2));
    CHECK(b.gamma2 == doctest::Approx(1.0).epsilon(0.2));
  }
  SUBCASE("characteristic speeds stay bounded toward t = 0") {
    PeriodicGrid grid(8, 2.0 * M_PI);
    Field small(grid, 2, -1e-3);
    small.values.setConstant(1e-3);
    const double s1 = max_characteristic_speed(sys, small);
    small.time = -1e-5;
    const double s2 = max_characteristic_speed(sys, small);
    CHECK(std::isfinite(s1));
    CHECK(s2 <= s1 + 1e-6);  // speeds shrink like (-t)^{1/Gamma - 1}
  }
  SUBCASE("div_b stable under step halving at a rest sample") {
    Vector v(2), w(2);
    v << 0.01, 0.005;
    w << 0.002, -0.001;
    auto r = div_b(sys, -0.3, 1.0, v, w);
    CHECK(r.value.allFinite());
    const double scale = std::max(r.value.cwiseAbs().maxCoeff(), 1e-12);
    CHECK(r.fd_error_estimate / scale <= 1e-6);
  }
}

TEST_CASE("euler structural suite with measured constants") {
  KasnerParams params{1.0, 4.0 / 3.0};
  EulerBackground bg;
  FuchsianSystem sys = fuchsian_form(bg, params);
  auto samples = SampleSet::draw(sys, 1000, 20240612);
  auto res = check_residuals(sys, samples);
  CHECK(res.pass(1e-10));
  auto c = estimate_constants(sys, samples, 2, 0.05);
  CHECK(c.b_const == 0.0);  // no singular flux part
  auto gate = kappa_gate(c, 2);
  CHECK(gate.pass);
  CHECK(zeta(c, 2) > 0.8);
}
