#include <doctest.h>

#include "fuchsol/decay.hpp"
#include "fuchsol/div_b.hpp"
#include "fuchsol/structural.hpp"

using namespace fuchsol;

namespace {

FuchsianSystem constant_system(const Matrix& b0, const Matrix& bc, const Matrix& p) {
  FuchsianSystem sys;
  sys.fiber_dim = static_cast<int>(b0.rows());
  sys.proj = ProjectionPair(sys.fiber_dim, p);
  sys.b0 = [b0](double, double, const Vector&, Matrix& m) { m = b0; };
  sys.bc = [bc](double, double, const Vector&, Matrix& m) { m = bc; };
  sys.ball_radius = 10.0;
  sys.finish_setup();
  return sys;
}

}  // namespace

TEST_CASE("projection checks") {
  auto p = ProjectionPair::diagonal({0, 1});
  auto rep = check_projection(p, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.idempotency_residual == 0.0);

  rep = check_projection(ProjectionPair::identity(3), 1e-12);
  CHECK(rep.pass);

  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  rep = check_projection(ProjectionPair(2, bad), 1e-12);
  CHECK(!rep.pass);
  CHECK(rep.symmetry_residual == doctest::Approx(1.0));

  Matrix nonsquare(2, 3);
  CHECK_THROWS_AS(ProjectionPair(2, nonsquare), ShapeError);
}

TEST_CASE("pointwise bounds: tightest constants") {
  SUBCASE("identity case") {
    auto sys = constant_system(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                               ProjectionPair::diagonal({0, 1}).p);
    auto samples = SampleSet::draw(sys, 50, 1);
    auto rep = check_pointwise_bounds(sys, samples);
    CHECK(rep.gamma1 == doctest::Approx(1.0));
    CHECK(rep.kappa == doctest::Approx(1.0));
    CHECK(rep.gamma2 == doctest::Approx(1.0));
  }
  SUBCASE("diag(2,1) vs diag(2,2)") {
    Matrix b0 = Vector::LinSpaced(2, 2, 1).asDiagonal();
    Matrix bc = 2.0 * Matrix::Identity(2, 2);
    auto sys = constant_system(b0, bc, Matrix::Identity(2, 2));
    auto samples = SampleSet::draw(sys, 50, 2);
    auto rep = check_pointwise_bounds(sys, samples);
    CHECK(rep.gamma1 == doctest::Approx(1.0));
    CHECK(rep.kappa == doctest::Approx(1.0));
    CHECK(rep.gamma2 == doctest::Approx(2.0));
  }
  SUBCASE("non-positive B0 is a structural violation") {
    Matrix b0(2, 2);
    b0 << 1, 0, 0, -1;
    auto sys = constant_system(b0, Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    auto samples = SampleSet::draw(sys, 10, 3);
    auto rep = check_pointwise_bounds(sys, samples);
    CHECK(!rep.pass());
    CHECK(rep.violations.front().what == "B0 not positive definite");
  }
}

TEST_CASE("kappa gate") {
  StructuralConstants c;
  c.kappa = 1.0;
  c.gamma1 = 3.0;
  auto g = kappa_gate(c, 3);
  CHECK(g.pass);
  CHECK(g.rhs == 0.0);

  c.kappa = 0.5;
  c.gamma1 = 1.0;
  c.beta[1] = 2.0;
  g = kappa_gate(c, 3);
  CHECK(g.rhs == doctest::Approx(1.0));
  CHECK(!g.pass);

  // pure function: identical inputs give bit-identical outputs
  auto g2 = kappa_gate(c, 3);
  CHECK(g.lhs == g2.lhs);
  CHECK(g.rhs == g2.rhs);
}

TEST_CASE("zeta") {
  StructuralConstants c;
  c.kappa_tilde = 0.73;
  c.gamma1_tilde = 2.0;
  CHECK(zeta(c, 5) == doctest::Approx(0.73));

  c.kappa_tilde = 1.0;
  c.gamma1_tilde = 1.0;
  c.beta[1] = 0.2;
  c.b_tilde = 0.01;
  CHECK(zeta(c, 4) == doctest::Approx(0.84));
  CHECK(zeta(c, 4) == zeta(c, 4));
}

TEST_CASE("decay rate table") {
  StructuralConstants c;
  c.sigma_loss = 0.05;
  c.p_exponent = 1.0;

  SUBCASE("zeta > p") {
    c.kappa_tilde = 2.0;
    c.gamma1_tilde = 1.0;
    auto d = decay_rate_table(c, 3);
    CHECK(d.applicable);
    CHECK(d.regime == DecayRegime::zeta_above_p);
    CHECK(d.exponent_pu == doctest::Approx(1.0));
    // |t|^{1/2} + |t|^{2 - sigma}
    REQUIRE(d.pperp_powers.size() == 2);
    CHECK(d.pperp_powers[0] == doctest::Approx(0.5));
    CHECK(d.pperp_powers[1] == doctest::Approx(1.95));
    CHECK(d.exponent_pperp == doctest::Approx(0.5));
    CHECK(!d.correction_term);
  }
  SUBCASE("middle case") {
    c.kappa_tilde = 0.9;
    c.gamma1_tilde = 1.0;
    auto d = decay_rate_table(c, 3);
    CHECK(d.regime == DecayRegime::zeta_mid);
    CHECK(d.exponent_pu == doctest::Approx(0.85));
  }
  SUBCASE("improved rates") {
    c.kappa_tilde = 0.3;
    c.gamma1_tilde = 1.0;
    ImprovedFlags f;
    f.pperp_all_vanish = true;
    auto d = decay_rate_table(c, 3, f);
    CHECK(d.exponent_pperp == doctest::Approx(1.0));

    ImprovedFlags f2;
    f2.pperp_b_vanish = true;
    d = decay_rate_table(c, 3, f2);
    // |t| + |t|^{2(zeta - sigma)}
    CHECK(d.exponent_pperp == doctest::Approx(std::min(1.0, 2.0 * 0.25)));
  }
  SUBCASE("zeta <= 0 flagged") {
    c.kappa_tilde = 0.1;
    c.gamma1_tilde = 1.0;
    c.beta[1] = 1.0;
    auto d = decay_rate_table(c, 3);
    CHECK(!d.applicable);
    CHECK(d.regime == DecayRegime::inapplicable);
  }
  SUBCASE("correction term flag") {
    c.kappa_tilde = 2.0;
    c.gamma1_tilde = 1.0;
    c.lambda1 = 0.3;
    auto d = decay_rate_table(c, 3);
    CHECK(d.correction_term);
    CHECK(d.exponent_pu == doctest::Approx(0.5));  // (lambda1+alpha)|t|^{1/2} dominates
  }
}

TEST_CASE("div_b vanishes for constant coefficients") {
  SUBCASE("fully constant system, F = 0") {
    FuchsianSystem sys = constant_system(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                         ProjectionPair::diagonal({0, 1}).p);
    sys.b1 = [](double, double, const Vector&, Matrix& m) { m = Matrix::Identity(2, 2); };
    Vector v(2), w(2);
    v << 0.1, -0.2;
    w << 0.3, 0.05;
    auto r = div_b(sys, -0.3, 0.7, v, w);
    CHECK(r.value.cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("time-dependent but x,v-independent flux") {
    FuchsianSystem sys = constant_system(Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                         ProjectionPair::diagonal({0, 1}).p);
    // B1 = c(t) * const: d/dx and D_v vanish, and div_b has no dB1/dt term
    sys.b1 = [](double t, double, const Vector&, Matrix& m) {
      m = std::cos(t) * Matrix::Ones(2, 2);
      m(0, 1) = m(1, 0);
    };
    Vector v(2), w(2);
    v << 0.05, 0.02;
    w << -0.4, 0.6;
    auto r = div_b(sys, -0.5, 0.2, v, w);
    CHECK(r.value.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("singular split recomposition") {
  // toy system with a genuine split: B1 = C0 + |t|^{-1/2} C1 + |t|^{-1} C2
  FuchsianSystem sys;
  sys.fiber_dim = 2;
  sys.proj = ProjectionPair::diagonal({0, 1});
  sys.ball_radius = 2.0;
  Matrix c0 = Matrix::Identity(2, 2);
  Matrix c1(2, 2), c2(2, 2);
  c1 << 0, 1, 1, 0;
  c2 << 0.5, 0, 0, 0.25;
  sys.b0 = [](double, double, const Vector&, Matrix& m) { m = Matrix::Identity(2, 2); };
  sys.bc = [](double, double, const Vector&, Matrix& m) { m = Matrix::Identity(2, 2); };
  sys.b1 = [=](double t, double, const Vector&, Matrix& m) {
    const double a = std::abs(t);
    m = c0 + c1 / std::sqrt(a) + c2 / a;
  };
  sys.f = [](double t, double, const Vector& v, Vector& f) {
    f.resize(2);
    f(0) = v(1) * v(1) / std::abs(t);  // P F2 = 0 with P = diag(0,1)
    f(1) = std::sin(t);
  };
  SingularSplit split;
  split.p_exponent = 1.0;
  split.b1_parts[0] = [=](double, double, const Vector&, Matrix& m) { m = c0; };
  split.b1_parts[1] = [=](double, double, const Vector&, Matrix& m) { m = c1; };
  split.b1_parts[2] = [=](double, double, const Vector&, Matrix& m) { m = c2; };
  split.f_parts[0] = [](double t, double, const Vector&, Vector& f) {
    f.resize(2);
    f(0) = 0.0;
    f(1) = std::sin(t);
  };
  split.f_parts[2] = [](double, double, const Vector& v, Vector& f) {
    f.resize(2);
    f(0) = v(1) * v(1);
    f(1) = 0.0;
  };
  sys.split = split;
  sys.finish_setup();

  Vector v(2);
  v << 0.3, -0.4;
  for (double t : {-1.0, -0.1, -1e-3}) {
    auto r = split_residual(sys, t, 0.3, v);
    CHECK(r.b1_rel <= 1e-12);
    CHECK(r.f_rel <= 1e-12);
    CHECK(r.pf2 == 0.0);
  }
}
