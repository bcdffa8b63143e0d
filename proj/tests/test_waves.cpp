#include <doctest.h>

#include <cmath>
#include <random>

#include "fuchsol/minkowski.hpp"
#include "fuchsol/schwarzschild.hpp"
#include "fuchsol/structural.hpp"

using namespace fuchsol;
using namespace fuchsol::wave;

TEST_CASE("minkowski conformal data and chart map") {
  auto d = minkowski::conformal_data(1.0, 1.0);
  CHECK(d.omega == doctest::Approx(1.0));
  CHECK(d.g(0, 0) == doctest::Approx(-1.0));
  CHECK(d.ricci_scalar == 0.0);
  d = minkowski::conformal_data(0.3, 2.0);
  CHECK(d.g(0, 0) == doctest::Approx(-1.0));

  auto [t, r] = minkowski::chart_map(0.0, 1.0);
  CHECK(t == doctest::Approx(1.0));
  CHECK(r == doctest::Approx(1.0));
  for (double rb : {0.5, 1.0, 4.0}) {
    auto [tt, rr] = minkowski::chart_map(0.0, rb);
    CHECK(tt == doctest::Approx(1.0));
    CHECK(rr == doctest::Approx(1.0 / rb));
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.1, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double rb = uni(rng) + 2.0, tb = uni(rng);
    auto [tt, rr] = minkowski::chart_map(tb, rb);
    auto [tb2, rb2] = minkowski::chart_map_inverse(tt, rr);
    CHECK(tb2 == doctest::Approx(tb).epsilon(1e-13));
    CHECK(rb2 == doctest::Approx(rb).epsilon(1e-13));
  }
  CHECK_THROWS_AS(minkowski::chart_map(2.0, 1.0), DomainError);
}

TEST_CASE("minkowski first-order matrices") {
  minkowski::MinkowskiChart chart;
  chart.lambda = 1.0;
  const auto q = Nonlinearity::scalar(1.0);
  Vector U = Vector::Zero(4);

  auto c = minkowski::first_order_coeffs(1.0, 0.3, U, chart, q);
  CHECK((c.b0 - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);

  // Bc at lambda = 1: diag(1, 1, 1, 1/2) with unit coupling (U4, U0)
  CHECK(c.bc(0, 0) == doctest::Approx(1.0));
  CHECK(c.bc(1, 1) == doctest::Approx(1.0));
  CHECK(c.bc(2, 2) == doctest::Approx(1.0));
  CHECK(c.bc(3, 3) == doctest::Approx(0.5));
  CHECK(c.bc(3, 0) == doctest::Approx(1.0));

  // exact h-symmetry of B1 at random samples
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  for (int i = 0; i < 20; ++i) {
    auto cc = minkowski::first_order_coeffs(uni(rng), uni(rng), U, chart, q);
    CHECK((cc.b1 - cc.b1.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((cc.b0 - cc.b0.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // h(V, B0 V) >= h(V, V) on [0, 1]
    CHECK(cc.b0.diagonal().minCoeff() >= 1.0);
  }
}

TEST_CASE("minkowski coercivity") {
  minkowski::MinkowskiChart chart;
  chart.lambda = 1.0;
  auto rep = minkowski::coercivity_check(chart);
  CHECK(rep.applicable);
  CHECK(rep.kappa == doctest::Approx(1.0 - 0.25 * (2.0 + std::sqrt(2.0))));
  CHECK(rep.kappa == doctest::Approx(0.146447).epsilon(1e-5));
  CHECK(rep.pass);

  chart.lambda = 0.25 * (2.0 + std::sqrt(2.0));
  rep = minkowski::coercivity_check(chart);
  CHECK(rep.kappa == doctest::Approx(0.0));
  CHECK(rep.min_ratio >= -1e-12);

  chart.lambda = 0.8;
  rep = minkowski::coercivity_check(chart);
  CHECK(!rep.applicable);
}

TEST_CASE("minkowski extension") {
  minkowski::MinkowskiChart chart;
  const auto q = Nonlinearity::scalar(1.0);
  minkowski::ExtensionReport rep;
  FuchsianSystem sys = minkowski::extend_system(chart, q, &rep);

  SUBCASE("cutoff plateau: extended equals original inside") {
    Vector U(4);
    U << 0.01, 0.02, 0.0, 0.03;
    const double s = -0.4, rho = 0.5 * chart.rho0();
    auto raw = minkowski::first_order_coeffs(-s, rho, U, chart, q);
    Matrix b1(4, 4);
    sys.b1(s, rho, U, b1);
    // extended flux = -(rho/m) B1 inside the plateau
    CHECK((b1 + (rho / chart.m) * raw.b1).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("outside the cutoff support the flux and source vanish") {
    Vector U(4);
    U << 0.1, 0.2, 0.0, 0.3;
    Matrix b1(4, 4);
    Vector f(4);
    const double rho_out = 2.5 * chart.rho0();
    sys.b1(-0.5, rho_out, U, b1);
    sys.f(-0.5, rho_out, U, f);
    CHECK(b1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.cwiseAbs().maxCoeff() == 0.0);
    Matrix bc(4, 4);
    sys.bc(-0.5, rho_out, U, bc);
    Matrix base(4, 4);
    sys.bc(-0.5, rho_out, Vector::Zero(4), base);
    CHECK((bc - base).cwiseAbs().maxCoeff() == 0.0);  // Bsc off too
  }
  SUBCASE("flux-gradient bound halves when m doubles") {
    minkowski::MinkowskiChart c2 = chart;
    c2.m = 2;
    minkowski::ExtensionReport rep2;
    minkowski::extend_system(c2, q, &rep2);
    const double ratio = rep.flux_gradient_sup / rep2.flux_gradient_sup;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("structural residuals at seeded samples") {
    auto samples = SampleSet::draw(sys, 300, 7);
    auto res = check_residuals(sys, samples);
    CHECK(res.pass(1e-10));
  }
}

TEST_CASE("minkowski boundary forms") {
  minkowski::MinkowskiChart chart;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0.05, 0.95);

  SUBCASE("Gamma minus vanishes for any V") {
    for (int i = 0; i < 20; ++i) {
      Vector V(4);
      for (int k = 0; k < 4; ++k) V(k) = gauss(rng);
      CHECK(std::abs(minkowski::boundary_form(chart, uni(rng), 0.0, V)) <= 1e-14);
    }
  }
  SUBCASE("Gamma plus: U4-only vector gives -|U4|^2") {
    const double t = 0.6;
    const double rho = chart.rho0() / std::pow(2.0 - t, 1.0 / chart.m);
    Vector V = Vector::Zero(4);
    V(3) = 1.3;
    CHECK(minkowski::boundary_form(chart, t, rho, V) == doctest::Approx(-1.3 * 1.3));
    CHECK(minkowski::boundary_form(chart, t, rho, Vector::Zero(4)) == 0.0);
  }
  SUBCASE("Gamma plus is nonpositive for random V") {
    for (int i = 0; i < 200; ++i) {
      const double t = uni(rng);
      const double rho = chart.rho0() / std::pow(2.0 - t, 1.0 / chart.m);
      Vector V(4);
      for (int k = 0; k < 4; ++k) V(k) = gauss(rng);
      V(2) = 0.0;  // spherically symmetric sector
      CHECK(minkowski::boundary_form(chart, t, rho, V) <= 1e-12);
    }
  }
  SUBCASE("point off both boundaries") {
    Vector V = Vector::Ones(4);
    CHECK_THROWS_AS(minkowski::boundary_form(chart, 0.5, 0.3 * chart.rho0(), V),
                    DomainError);
  }
}

TEST_CASE("minkowski reconstruction") {
  minkowski::MinkowskiChart chart;
  chart.lambda = 0.5 + 0.25 * std::sqrt(2.0) + 0.3;  // any admissible
  Vector U(4);
  U << 0.1, 0.2, 0.0, 0.7;
  SUBCASE("lambda = 1/2 would make u = U4; check exponent scaling directly") {
    auto rec = minkowski::reconstruct_scalar(U, 1.0, 1.0, chart);
    CHECK(rec.u(0) == doctest::Approx(0.7));  // t = 1
    CHECK(rec.u_bar(0) == doctest::Approx(rec.u(0)));  // r t (2 - t) = 1
  }
  SUBCASE("scaling in t") {
    const double t = 0.25;
    auto rec = minkowski::reconstruct_scalar(U, t, 1.0, chart);
    CHECK(rec.u(0) == doctest::Approx(std::pow(t, 0.5 - chart.lambda) * 0.7));
  }
}

TEST_CASE("minkowski second-order residual of the reconstruction") {
  minkowski::MinkowskiChart chart;
  const auto q = Nonlinearity::scalar(1.0);
  FuchsianSystem sys = minkowski::extend_system(chart, q);

  auto residual = [&](int n, double dt_snap) {
    const PeriodicGrid grid = minkowski::make_grid(chart, n);
    Field init = minkowski::initial_data(chart, grid, 1e-2);
    const double t_mid = 0.5;
    MonitorConfig mon;
    mon.k_reg = 1;
    mon.store_fields = true;
    mon.forced_times = {-(t_mid + dt_snap), -t_mid, -(t_mid - dt_snap)};
    StepSchedule sched;
    sched.t_floor = -(t_mid - dt_snap);
    RunRecord rec = evolve(sys, init, sched, mon);
    REQUIRE(rec.fields.size() >= 3);
    // pick the three forced snapshots (last three stored fields)
    std::vector<Field> snaps(rec.fields.end() - 3, rec.fields.end());

    auto u_of = [&](const Field& f) {
      Matrix u(1, n);
      const double t = -f.time;
      for (int j = 0; j < n; ++j)
        u(0, j) = std::pow(t, 0.5 - chart.lambda) * f.values(3, j);
      return u;
    };
    const Matrix up = u_of(snaps[0]), u0 = u_of(snaps[1]), um = u_of(snaps[2]);
    const Matrix ut = (up - um) / (2.0 * dt_snap);
    const Matrix utt = (up - 2.0 * u0 + um) / (dt_snap * dt_snap);
    const double h = grid.spacing();
    Matrix du, d1, dd1, dut;
    derivative_into(u0, h, 4, du);
    Matrix rdr(1, n);
    for (int j = 0; j < n; ++j) rdr(0, j) = grid.x(j) / chart.m * du(0, j);
    derivative_into(rdr, h, 4, dd1);
    derivative_into(ut, h, 4, dut);

    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      const double rho = grid.x(j);
      if (rho < 0.05 * chart.rho0() || rho > 0.95 * chart.rho0()) continue;
      const double r = std::pow(rho, chart.m);
      const double t = t_mid;
      const double r2urr = rho / chart.m * dd1(0, j) - rdr(0, j);
      const double mixed = 2.0 * r * (1.0 - t) / r * (rho / chart.m) * dut(0, j);
      const double lhs = (-2.0 + t) * t * utt(0, j) + r2urr + mixed +
                         2.0 * (t - 1.0) * ut(0, j);
      const double ub = r * t * (2.0 - t) * u0(0, j);
      const double f =
          1.0 * (2.0 * r * (2.0 - 2.0 * t + t * t) * u0(0, j) * rdr(0, j) -
                 r * (2.0 - t) * (2.0 - t) * t * t * ut(0, j) * ut(0, j) +
                 r * (2.0 - t) * t * rdr(0, j) * rdr(0, j) +
                 2.0 * r * (2.0 - 3.0 * t + t * t) * t *
                     (ut(0, j) * rdr(0, j) - ut(0, j) * u0(0, j)) +
                 r * (2.0 - t) * t * u0(0, j) * u0(0, j));
      (void)ub;
      worst = std::max(worst, std::abs(lhs - f));
    }
    return worst;
  };

  const double r1 = residual(128, 4e-3);
  const double r2 = residual(256, 2e-3);
  CHECK(r2 < r1);
  CHECK(std::log2(r1 / r2) >= 1.7);  // O(h^2 + dt^2)
}

TEST_CASE("schwarzschild background functions") {
  using schwarzschild::background_functions;
  for (double t : {0.1, 0.5, 1.0}) {
    CHECK(background_functions(t, 1e-12).a == doctest::Approx(1.0));
    CHECK(background_functions(t, 0.0).script_a == doctest::Approx(1.0 - t));
    CHECK(background_functions(t, 0.0).ricci == 0.0);
  }
  for (double r : {0.0, 0.3, 0.8}) CHECK(background_functions(1.0, r).a == doctest::Approx(1.0));
  CHECK(background_functions(1.0, 0.99999).ricci == doctest::Approx(6.0).epsilon(1e-3));
  CHECK_THROWS_AS(background_functions(0.5, 1.0), DomainError);
}

TEST_CASE("schwarzschild frozen matrices") {
  schwarzschild::SchwarzschildChart chart;
  chart.lambda = 1.0;
  auto fz = schwarzschild::frozen_coeffs(1.0, chart);
  CHECK(fz.b0_star(0, 0) == doctest::Approx(0.5));
  CHECK(fz.b0_star(1, 1) == doctest::Approx(2.0));
  CHECK(fz.b0_star(2, 2) == doctest::Approx(2.0));
  CHECK(fz.b0_star(3, 3) == doctest::Approx(1.0));
  CHECK(fz.bc_star(0, 0) == doctest::Approx(0.75));  // [3/4 - script_a]/(2-t) at t=1
  CHECK(fz.bc_star(3, 0) == doctest::Approx(0.5));
  CHECK(fz.bc_star(3, 3) == doctest::Approx(0.5));   // lambda - 1/2
  CHECK(fz.bc_star(1, 1) == doctest::Approx(2.0 * chart.lambda));

  // continuity of the raw coefficients toward rho = 0
  const auto q = Nonlinearity::scalar(1.0);
  Vector U = Vector::Zero(4);
  for (double t : {0.3, 0.9}) {
    auto c = schwarzschild::first_order_coeffs(t, 1e-6, U, chart, q);
    auto f = schwarzschild::frozen_coeffs(t, chart);
    CHECK((c.b0 - f.b0_star).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((c.bc - f.bc_star).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("schwarzschild symmetry and coercivity of the extension") {
  schwarzschild::SchwarzschildChart chart;
  const auto q = Nonlinearity::scalar(1.0);
  schwarzschild::AuditReport audit;
  FuchsianSystem sys = schwarzschild::extend_system(chart, q, &audit);

  SUBCASE("audit slopes and margins") {
    CHECK(audit.slope_b0 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(audit.slope_bc == doctest::Approx(2.0).epsilon(0.05));
    CHECK(audit.coercivity_margin > 0.0);
    CHECK(audit.pass);
  }
  SUBCASE("h-symmetry and B0 >= 1/4 at samples") {
    auto samples = SampleSet::draw(sys, 300, 8);
    auto res = check_residuals(sys, samples);
    CHECK(res.pass(1e-10));
    CHECK(res.b0_posdef_margin >= 0.25);
  }
  SUBCASE("flux-gradient bound halves when m doubles") {
    schwarzschild::SchwarzschildChart c4 = chart, c8 = chart;
    c4.m = 4;
    c8.m = 8;
    schwarzschild::AuditReport a4, a8;
    schwarzschild::extend_system(c4, q, &a4);
    schwarzschild::extend_system(c8, q, &a8);
    CHECK(a4.flux_gradient_sup / a8.flux_gradient_sup == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("schwarzschild boundary forms") {
  schwarzschild::SchwarzschildChart chart;
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    Vector V(4);
    for (int k = 0; k < 4; ++k) V(k) = gauss(rng);
    V(2) = 0.0;
    const double t = uni(rng);
    CHECK(schwarzschild::boundary_form(chart, t, 0.0, V) == 0.0);
    CHECK(schwarzschild::boundary_form(chart, t, chart.rho0, V) <= 1e-12);
  }
}

TEST_CASE("schwarzschild decay exponent is mass-independent" * doctest::timeout(300)) {
  const auto q = Nonlinearity::scalar(1.0);
  DecayRunConfig cfg;
  cfg.n_points = 128;
  cfg.k_reg = 1;
  cfg.s_floor = -1e-3;
  cfg.delta = 1e-3;

  auto fitted = [&](double mu) {
    schwarzschild::SchwarzschildChart chart;
    chart.mu = mu;
    FuchsianSystem sys = schwarzschild::extend_system(chart, q);
    const PeriodicGrid grid = schwarzschild::make_grid(chart, cfg.n_points);
    Field init = schwarzschild::initial_data(chart, grid, cfg.delta);
    return run_decay(sys, init, chart.kappa(), cfg).fitted_exponent;
  };
  const double e1 = fitted(0.5), e2 = fitted(1.0), e3 = fitted(2.0);
  CHECK(std::abs(e1 - e2) <= 0.02);
  CHECK(std::abs(e2 - e3) <= 0.02);
}
