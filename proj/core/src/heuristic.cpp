#include "fuchsol/heuristic.hpp"

#include <cmath>

#include "fuchsol/fit.hpp"
#include "fuchsol/quadrature.hpp"

namespace fuchsol {
namespace oracle {

void HeuristicProblem::validate() const {
  if (a <= 0.0) throw DomainError("heuristic: a must be positive");
  if (p <= 0.0 || p > 1.0) throw DomainError("heuristic: p must be in (0, 1]");
}

std::array<double, 2> exact_solution(const HeuristicProblem& prob, double t, double quad_tol) {
  prob.validate();
  if (t >= 0.0) throw DomainError("heuristic: t must be negative");
  if (t < -1.0) throw DomainError("heuristic: t must be in [-1, 0)");
  const double p = prob.p, a = prob.a;
  auto f1 = [&](double s) { return prob.ftilde ? prob.ftilde(s)[0] : 0.0; };
  auto f2 = [&](double s) { return prob.ftilde ? prob.ftilde(s)[1] : 0.0; };

  // s = -sigma^{1/p}: int_{-1}^t |s|^{-1+p} g(s) ds = (1/p) int_{(-t)^p}^1 g(-sigma^{1/p}) dsigma
  const double sig_t = std::pow(-t, p);
  double i1 = 0.0, i2 = 0.0;
  if (prob.ftilde) {
    i1 = integrate([&](double sig) { return f1(-std::pow(sig, 1.0 / p)); }, sig_t, 1.0,
                   quad_tol) / p;
    i2 = integrate(
             [&](double sig) { return std::pow(sig, -a / p) * f2(-std::pow(sig, 1.0 / p)); },
             sig_t, 1.0, quad_tol) / p;
  }
  return {prob.u_star + i1, std::pow(-t, a) * (prob.u_starstar + i2)};
}

double u1_limit(const HeuristicProblem& prob, double quad_tol) {
  prob.validate();
  if (!prob.ftilde) return prob.u_star;
  const double p = prob.p;
  const double i1 = integrate(
      [&](double sig) { return prob.ftilde(-std::pow(sig, 1.0 / p))[0]; }, 0.0, 1.0, quad_tol);
  return prob.u_star + i1 / p;
}

DecayCheckReport decay_check(const HeuristicProblem& prob, const std::vector<double>& t_grid) {
  DecayCheckReport rep;
  const double u1_0 = u1_limit(prob);
  lab::DecaySeries s1, s2;
  s1.label = "u1-deviation";
  s2.label = "u2";
  for (double t : t_grid) {
    const auto u = exact_solution(prob, t);
    s1.times.push_back(t);
    s1.values.push_back(std::abs(u[0] - u1_0));
    s2.times.push_back(t);
    s2.values.push_back(std::abs(u[1]));
  }
  // bound constants fitted at the earliest grid time
  const auto u_first = exact_solution(prob, t_grid.front());
  const double t0 = std::abs(t_grid.front());
  rep.u1_bound_const = std::abs(u_first[0] - u1_0) / std::pow(t0, prob.p);
  rep.u2_bound_const = std::abs(u_first[1]) / (std::pow(t0, prob.p) + std::pow(t0, prob.a));
  rep.bounds_hold = true;
  const double slack = 1.0 + 1e-9;
  for (size_t i = 0; i < s1.times.size(); ++i) {
    const double at = std::abs(s1.times[i]);
    if (s1.values[i] > slack * rep.u1_bound_const * std::pow(at, prob.p) + 1e-14)
      rep.bounds_hold = false;
    if (s2.values[i] >
        slack * rep.u2_bound_const * (std::pow(at, prob.p) + std::pow(at, prob.a)) + 1e-14)
      rep.bounds_hold = false;
  }

  const double floor = 1e-14 * (std::abs(u1_0) + 1.0);
  bool u1_nontrivial = false;
  for (double v : s1.values) u1_nontrivial = u1_nontrivial || v > floor;
  if (u1_nontrivial) {
    const auto fit = lab::fit_power_law(s1, lab::FitWindow::late_window(s1));
    rep.u1_exponent = fit.exponent;
    rep.u1_fit_done = true;
  }
  bool u2_nontrivial = false;
  for (double v : s2.values) u2_nontrivial = u2_nontrivial || v > floor;
  if (u2_nontrivial) {
    const auto fit = lab::fit_power_law(s2, lab::FitWindow::late_window(s2));
    rep.u2_exponent = fit.exponent;
    rep.u2_fit_done = true;
  }
  return rep;
}

FuchsianSystem as_fuchsian(const HeuristicProblem& prob) {
  prob.validate();
  FuchsianSystem sys;
  sys.name = "heuristic-ode";
  sys.fiber_dim = 2;
  sys.proj = ProjectionPair::diagonal({0, 1});
  sys.ball_radius = 1e6;  // linear problem, no genuine ball constraint
  const double a = prob.a, p = prob.p;
  sys.b0 = [](double, double, const Vector&, Matrix& out) { out = Matrix::Identity(2, 2); };
  sys.b1 = nullptr;
  sys.bc = [a](double, double, const Vector&, Matrix& out) {
    out = a * Matrix::Identity(2, 2);
  };
  auto ft = prob.ftilde;
  sys.f = [ft, p](double t, double, const Vector&, Vector& out) {
    out.setZero(2);
    if (!ft) return;
    const auto v = ft(t);
    const double w = std::pow(std::abs(t), -(1.0 - p));
    out(0) = w * v[0];
    out(1) = w * v[1];
  };
  SingularSplit split;
  split.p_exponent = p;
  if (ft)
    split.ftilde = [ft](double t, double, Vector& out) {
      const auto v = ft(t);
      out.resize(2);
      out(0) = v[0];
      out(1) = v[1];
    };
  sys.split = split;
  sys.t_min = -1.0;
  sys.t_max = -1e-4;
  sys.finish_setup();
  return sys;
}

}  // namespace oracle
}  // namespace fuchsol
