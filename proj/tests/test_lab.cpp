#include <doctest.h>

#include <cmath>

#include "fuchsol/fit.hpp"
#include "fuchsol/report.hpp"

using namespace fuchsol;
using namespace fuchsol::lab;

namespace {

DecaySeries power_series(double expo, double scale = 1.0) {
  DecaySeries s;
  for (double t = -1.0; t < -1e-6; t *= 0.9) {
    s.times.push_back(t);
    s.values.push_back(scale * std::pow(-t, expo));
  }
  return s;
}

}  // namespace

TEST_CASE("fit_power_law") {
  SUBCASE("exact power law") {
    auto s = power_series(0.5);
    auto fit = fit_power_law(s, FitWindow::late_window(s));
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("dominant-term extraction from a sum") {
    DecaySeries s;
    for (double t = -1.0; t < -1e-6; t *= 0.9) {
      s.times.push_back(t);
      s.values.push_back(std::pow(-t, 0.5) + std::pow(-t, 2.0));
    }
    auto fit = fit_power_law(s, FitWindow::late_window(s));
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.04));
  }
  SUBCASE("invariance under positive rescaling") {
    auto s1 = power_series(0.7);
    auto s2 = power_series(0.7, 137.0);
    const auto w = FitWindow::late_window(s1);
    CHECK(std::abs(fit_power_law(s1, w).exponent - fit_power_law(s2, w).exponent) <= 1e-12);
  }
  SUBCASE("nonpositive values are an error listing indices") {
    auto s = power_series(1.0);
    s.values[s.values.size() - 3] = 0.0;
    CHECK_THROWS_WITH_AS(fit_power_law(s, FitWindow::late_window(s)),
                         doctest::Contains("nonpositive"), DomainError);
  }
  SUBCASE("too few samples") {
    DecaySeries s;
    for (double t = -1.0; t < -0.5; t *= 0.9) {
      s.times.push_back(t);
      s.values.push_back(1.0);
    }
    FitWindow w{-1.0, -0.5};
    CHECK_THROWS_AS(fit_power_law(s, w), DomainError);
  }
}

TEST_CASE("limit_extract") {
  PeriodicGrid g(16, 1.0);
  auto make = [&](double t, double c, double rate) {
    Field f(g, 1, t);
    for (int j = 0; j < 16; ++j)
      f.values(0, j) = std::sin(g.x(j)) + c * std::pow(-t, rate);
    return f;
  };
  SUBCASE("exactly constant snapshots") {
    std::vector<Field> snaps = {make(-4e-3, 0.0, 1.0), make(-2e-3, 0.0, 1.0),
                                make(-1e-3, 0.0, 1.0)};
    auto e = limit_extract(snaps, 1.0);
    CHECK(e.consistent);
    CHECK(e.error_bound <= 1e-14);
    CHECK(std::abs(e.limit(3) - std::sin(g.x(3))) <= 1e-14);
  }
  SUBCASE("synthetic u(0) + |t| series recovered to 1e-10") {
    std::vector<Field> snaps = {make(-4e-3, 0.7, 1.0), make(-2e-3, 0.7, 1.0),
                                make(-1e-3, 0.7, 1.0)};
    auto e = limit_extract(snaps, 1.0);
    CHECK(e.consistent);
    for (int j = 0; j < 16; ++j) CHECK(std::abs(e.limit(j) - std::sin(g.x(j))) <= 1e-10);
  }
  SUBCASE("inconsistent rate falls back to the last snapshot") {
    // true rate 0.3, assumed 1.0: model residual large
    std::vector<Field> snaps = {make(-4e-1, 1.0, 0.3), make(-2e-1, 1.0, 0.3),
                                make(-1e-1, 1.0, 0.3)};
    auto e = limit_extract(snaps, 1.0);
    CHECK(!e.consistent);
    CHECK(std::abs(e.limit(0) - snaps.back().values(0, 0)) <= 1e-14);
    CHECK(e.error_bound > 0.0);
  }
}

TEST_CASE("energy_estimate_check") {
  std::vector<double> times, q;
  for (double t = -1.0; t < -1e-4; t *= 0.8) {
    times.push_back(t);
    q.push_back(2.0);
  }
  SUBCASE("constant Q passes") {
    auto rep = energy_estimate_check(times, q, 2.0);
    CHECK(rep.pass);
    CHECK(rep.calibration_c == doctest::Approx(1.0));
  }
  SUBCASE("injected blow-up is flagged") {
    auto q2 = q;
    q2.back() = 100.0;
    auto rep = energy_estimate_check(times, q2, 2.0);
    CHECK(!rep.pass);
  }
}

TEST_CASE("record CSV is deterministic") {
  RunRecord rec;
  rec.k = 1;
  RunSample s;
  s.t = -0.5;
  s.dt = 0.01;
  s.hk = {1.0 / 3.0, 0.7};
  s.p_l2 = 0.1;
  s.p_hkm1 = 0.2;
  s.pperp_hkm1 = 0.3;
  s.energy_q = 0.4;
  s.identity_residual = 1e-5;
  rec.samples.push_back(s);
  const std::string a = record_to_csv(rec);
  const std::string b = record_to_csv(rec);
  CHECK(a == b);
  CHECK(a.find("t,dt,L2,H1,P_L2,P_Hk1,Pperp_Hk1,energy_Q,identity_residual") == 0);
}
