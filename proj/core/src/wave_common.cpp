#include "fuchsol/wave_common.hpp"

#include <cmath>

#include "fuchsol/fit.hpp"

namespace fuchsol {
namespace wave {

Nonlinearity Nonlinearity::scalar(double c) { return constant(1, {c}); }

Nonlinearity Nonlinearity::constant(int n, std::vector<double> q) {
  if (static_cast<int>(q.size()) != n * n * n)
    throw ShapeError("Nonlinearity: need n^3 coefficients");
  Nonlinearity nl;
  nl.n_fields = n;
  nl.q_const.resize(q.size());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        nl.q_const[(k * n + i) * n + j] =
            0.5 * (q[(k * n + i) * n + j] + q[(k * n + j) * n + i]);
  return nl;
}

void Nonlinearity::eval(const Vector& ubar, std::vector<double>& out) const {
  const int n = n_fields;
  if (q_eval) {
    q_eval(ubar, out);
    if (static_cast<int>(out.size()) != n * n * n)
      throw ShapeError("Nonlinearity callback returned wrong size");
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
          const double s =
              0.5 * (out[(k * n + i) * n + j] + out[(k * n + j) * n + i]);
          out[(k * n + i) * n + j] = out[(k * n + j) * n + i] = s;
        }
    return;
  }
  out = q_const;
}

double smooth_cutoff(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  auto bump = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double s = 2.0 - a;
  return bump(s) / (bump(s) + bump(1.0 - s));
}

double smooth_cutoff_dx(double xi) {
  const double h = 1e-6;
  return (smooth_cutoff(xi + h) - smooth_cutoff(xi - h)) / (2.0 * h);
}

Vector conformal_source(const Nonlinearity& q, const ConformalSourceArgs& a) {
  const int n = q.n_fields;
  if (a.omega <= 0.0) throw DomainError("conformal_source: Omega must be positive");
  const double half_n = 0.5 * a.n_dim;
  const double w_arg = std::pow(a.omega, 1.0 - half_n);
  const Vector ubar = w_arg * a.u;
  std::vector<double> qc;
  q.eval(ubar, qc);

  // metric contractions
  Matrix guu(n, n);  // g(grad u^I, grad u^J)
  Vector gou(n);     // g(grad Omega^{-1}, grad u^I)
  for (int i = 0; i < n; ++i) {
    gou(i) = a.grad_omega_inv.dot(a.g_inv * a.grad_u.col(i));
    for (int j = 0; j < n; ++j) guu(i, j) = a.grad_u.col(i).dot(a.g_inv * a.grad_u.col(j));
  }
  const double goo = a.grad_omega_inv.dot(a.g_inv * a.grad_omega_inv);

  const double c1 = std::pow(a.omega, 1.0 - half_n);
  const double c2 = (a.n_dim - 2.0) * std::pow(a.omega, 2.0 - half_n);
  const double c3 = (1.0 - half_n) * (1.0 - half_n) * std::pow(a.omega, 3.0 - half_n);

  Vector f = Vector::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double qk = qc[(k * n + i) * n + j];
        if (qk == 0.0) continue;
        const double sym_ou = 0.5 * (gou(i) * a.u(j) + gou(j) * a.u(i));
        f(k) += qk * (c1 * guu(i, j) + c2 * sym_ou + c3 * goo * a.u(i) * a.u(j));
      }
  return f;
}

DecayReport run_decay(const FuchsianSystem& sys, const Field& initial, double kappa,
                      const DecayRunConfig& cfg) {
  DecayReport rep;
  MonitorConfig mon;
  mon.k_reg = cfg.k_reg;
  mon.forced_times = {-cfg.calib_t};
  StepSchedule sched = cfg.schedule;
  sched.t_floor = cfg.s_floor;
  rep.record = evolve(sys, initial, sched, mon);
  rep.aborted = rep.record.aborted;
  if (rep.aborted) return rep;

  const double rate = kappa - cfg.margin;
  double c_at_calib = -1.0;
  for (const auto& s : rep.record.samples) {
    if (std::abs(std::abs(s.t) - cfg.calib_t) < 1e-12 * cfg.calib_t + 1e-14) {
      c_at_calib = s.hk.back() / std::pow(cfg.calib_t, rate);
      break;
    }
  }
  if (c_at_calib < 0.0) throw DomainError("run_decay: calibration sample missing");
  rep.calibrated_c = c_at_calib;
  rep.worst_ratio = 0.0;
  lab::DecaySeries series;
  for (const auto& s : rep.record.samples) {
    const double t_paper = std::abs(s.t);
    series.times.push_back(s.t);
    series.values.push_back(s.hk.back());
    if (t_paper < cfg.calib_t - 1e-12) {
      const double env = c_at_calib * std::pow(t_paper, rate);
      rep.worst_ratio = std::max(rep.worst_ratio, s.hk.back() / env);
    }
  }
  rep.bound_ok = rep.worst_ratio <= 1.0 + 1e-9;
  rep.fitted_exponent =
      lab::fit_power_law(series, lab::FitWindow::late_window(series)).exponent;
  return rep;
}

}  // namespace wave
}  // namespace fuchsol
