#include "fuchsol/euler.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "fuchsol/fit.hpp"

namespace fuchsol {
namespace euler {

namespace {

void bbar0(double g, double v0, double v1, Matrix& m) {
  m.resize(2, 2);
  m(0, 0) = v0 * (v0 * v0 + 3.0 * v1 * v1 * (g - 1.0));
  m(0, 1) = v1 * (v0 * v0 * (1.0 - 2.0 * g) - v1 * v1 * (g - 1.0));
  m(1, 0) = m(0, 1);
  m(1, 1) = v0 * ((g - 1.0) * v0 * v0 + v1 * v1 * (2.0 * g - 1.0));
}

void bbar1(double g, double v0, double v1, Matrix& m) {
  m.resize(2, 2);
  m(0, 0) = -v1 * ((1.0 - 2.0 * g) * v0 * v0 - v1 * v1 * (g - 1.0));
  m(0, 1) = -v0 * (v0 * v0 * (g - 1.0) - v1 * v1 * (1.0 - 2.0 * g));
  m(1, 0) = m(0, 1);
  m(1, 1) = v1 * (3.0 * (g - 1.0) * v0 * v0 + v1 * v1);
}

double bc22(double g, double v0, double v1) {
  return (1.0 + v0) * (1.0 + 2.0 * v0 + v0 * v0 - v1 * v1) * (g - 1.0);
}

Vector f2_vec(double g, double v0, double v1) {
  Vector f(2);
  f(0) = (g - 1.0) * v1 * v1 * (v1 * v1 - (1.0 + v0) * (1.0 + v0));
  f(1) = 0.0;
  return f;
}

}  // namespace

PhysicalCoeffs physical_coeffs(double tau, double v0, double v1, const KasnerParams& params) {
  if (tau >= 0.0) throw DomainError("physical_coeffs: tau must be negative");
  PhysicalCoeffs c;
  bbar0(params.gamma, v0, v1, c.b0);
  bbar1(params.gamma, v0, v1, c.b1);
  const double G = params.big_gamma();
  const double q = v0 * v0 - v1 * v1;
  c.source.resize(2);
  c.source(0) = (G / tau) * q * v0 * v0;
  c.source(1) = -(G / tau) * q * v0 * v1;
  c.degenerate = std::abs(q) <= 1e-14 * (v0 * v0 + v1 * v1);
  return c;
}

FuchsianSystem physical_system(const KasnerParams& params) {
  FuchsianSystem sys;
  sys.name = "euler-physical";
  sys.fiber_dim = 2;
  sys.proj = ProjectionPair::diagonal({0, 0});
  sys.ball_radius = 1e9;
  const double g = params.gamma;
  const double G = params.big_gamma();
  sys.b0 = [g](double, double, const Vector& v, Matrix& m) { bbar0(g, v(0), v(1), m); };
  sys.b1 = [g](double, double, const Vector& v, Matrix& m) { bbar1(g, v(0), v(1), m); };
  sys.bc = [](double, double, const Vector&, Matrix& m) { m = Matrix::Zero(2, 2); };
  sys.f = [G](double tau, double, const Vector& v, Vector& f) {
    const double q = v(0) * v(0) - v(1) * v(1);
    f.resize(2);
    f(0) = (G / tau) * q * v(0) * v(0);
    f(1) = -(G / tau) * q * v(0) * v(1);
  };
  sys.t_min = -2.0;
  sys.t_max = -0.1;
  sys.finish_setup();
  return sys;
}

double rest_residual(const KasnerParams& params, double v_star, double tau, int n_points) {
  const double G = params.big_gamma();
  PeriodicGrid grid(n_points, 2.0 * M_PI);
  Field state(grid, 2, tau);
  const double V0 = -v_star * std::pow(-tau, G);
  for (int j = 0; j < n_points; ++j) state.values(0, j) = V0;

  Matrix dx;
  derivative_into(state.values, grid.spacing(), 4, dx);
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < n_points; ++j) {
    const auto c = physical_coeffs(tau, state.values(0, j), state.values(1, j), params);
    Vector dtau(2);
    dtau << G * state.values(0, j) / tau, 0.0;
    const Vector res = c.b0 * dtau + c.b1 * dx.col(j) - c.source;
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
    scale = std::max({scale, (c.b0 * dtau).cwiseAbs().maxCoeff(),
                      c.source.cwiseAbs().maxCoeff()});
  }
  return worst / std::max(scale, 1e-300);
}

double EulerBackground::ustar_dx_at(double x) const {
  if (u_star_dx) return u_star_dx(x);
  if (!u_star) return 0.0;
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (u_star(x + h) - u_star(x - h)) / (2.0 * h);
}

double EulerBackground::uh(int i, double t, double x) const {
  const auto& fn = i == 0 ? uhat0 : uhat1;
  return fn ? fn(t, x) : 0.0;
}

double EulerBackground::duh_dt(int i, double t, double x) const {
  const auto& d = i == 0 ? duhat0_dt : duhat1_dt;
  if (d) return d(t, x);
  const auto& fn = i == 0 ? uhat0 : uhat1;
  if (!fn) return 0.0;
  const double h = std::min(1e-6 * std::max(1.0, std::abs(t)), 0.45 * std::abs(t));
  return (fn(t + h, x) - fn(t - h, x)) / (2.0 * h);
}

double EulerBackground::duh_dx(int i, double t, double x) const {
  const auto& d = i == 0 ? duhat0_dx : duhat1_dx;
  if (d) return d(t, x);
  const auto& fn = i == 0 ? uhat0 : uhat1;
  if (!fn) return 0.0;
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (fn(t, x + h) - fn(t, x - h)) / (2.0 * h);
}

namespace {

void check_positivity(double one_plus, double t, double x, const PositivityOptions& opt,
                      bool* warned) {
  if (one_plus <= 0.0) {
    std::ostringstream os;
    os << "fluid positivity lost: 1 + Uhat0 + u0 = " << one_plus << " at t=" << t
       << ", x=" << x;
    throw DomainError(os.str());
  }
  if (one_plus < opt.warn_threshold && warned) *warned = true;
}

}  // namespace

PerturbationState to_perturbation(const FluidState& state, const EulerBackground& bg,
                                  PositivityOptions opt) {
  const double G = state.params.big_gamma();
  const double tau = state.field.time;
  if (tau >= 0.0) throw DomainError("to_perturbation: tau must be negative");
  const double t = -std::pow(-tau, G);
  PerturbationState out;
  out.params = state.params;
  out.field = Field(state.field.grid, 2, t);
  bool warned = false;
  for (int j = 0; j < state.field.grid.n_points; ++j) {
    const double x = state.field.grid.x(j);
    const double E = std::exp(bg.ustar_at(x));
    const double u0 = state.field.values(0, j) / (t * E) - 1.0 - bg.uh(0, t, x);
    const double u1 = state.field.values(1, j) / (t * E) - bg.uh(1, t, x);
    check_positivity(1.0 + bg.uh(0, t, x) + u0, t, x, opt, &warned);
    out.field.values(0, j) = u0;
    out.field.values(1, j) = u1;
  }
  (void)warned;
  return out;
}

FluidState from_perturbation(const PerturbationState& state, const EulerBackground& bg,
                             PositivityOptions opt) {
  const double G = state.params.big_gamma();
  const double t = state.field.time;
  if (t >= 0.0) throw DomainError("from_perturbation: t must be negative");
  FluidState out;
  out.params = state.params;
  out.field = Field(state.field.grid, 2, -std::pow(-t, 1.0 / G));
  bool warned = false;
  for (int j = 0; j < state.field.grid.n_points; ++j) {
    const double x = state.field.grid.x(j);
    const double E = std::exp(bg.ustar_at(x));
    const double one_plus = 1.0 + bg.uh(0, t, x) + state.field.values(0, j);
    check_positivity(one_plus, t, x, opt, &warned);
    out.field.values(0, j) = t * E * one_plus;
    out.field.values(1, j) = t * E * (bg.uh(1, t, x) + state.field.values(1, j));
  }
  (void)warned;
  return out;
}

FuchsianSystem fuchsian_form(const EulerBackground& bg, const KasnerParams& params,
                             double ball_radius, double t_begin) {
  if (!params.in_regime())
    throw DomainError("fuchsian_form: requires gamma in (1,2) and Gamma in (0,1)");
  FuchsianSystem sys;
  sys.name = "euler-kasner";
  sys.fiber_dim = 2;
  sys.proj = ProjectionPair::diagonal({0, 1});
  sys.ball_radius = ball_radius;
  const double g = params.gamma;
  const double G = params.big_gamma();
  // tau/(Gamma t) = (-t)^{1/Gamma - 1}/Gamma, bounded for Gamma < 1
  auto svel = [G](double t) { return std::pow(-t, 1.0 / G - 1.0) / G; };

  sys.b0 = [bg, g](double t, double x, const Vector& v, Matrix& m) {
    bbar0(g, 1.0 + bg.uh(0, t, x) + v(0), bg.uh(1, t, x) + v(1), m);
  };
  sys.b1 = [bg, g, svel](double t, double x, const Vector& v, Matrix& m) {
    bbar1(g, 1.0 + bg.uh(0, t, x) + v(0), bg.uh(1, t, x) + v(1), m);
    m *= svel(t);
  };
  sys.bc = [g](double, double, const Vector& v, Matrix& m) {
    m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = bc22(g, v(0), v(1));
  };

  auto full_f = [bg, g, svel](double t, double x, const Vector& v, Vector& f) {
    const double a = 1.0 + bg.uh(0, t, x) + v(0);
    const double b = bg.uh(1, t, x) + v(1);
    Matrix m0, m1;
    bbar0(g, a, b, m0);
    Vector ab(2);
    ab << a, b;
    const double q = a * a - b * b;
    Vector bracket(2);
    bracket << q * a * a, -q * a * b;
    bracket -= m0 * ab;
    // (1/t)(bracket - Bc P v); bracket == Bc P v + F2 up to O(Uhat) terms
    bracket(1) -= bc22(g, v(0), v(1)) * v(1);
    f = bracket / t;
    const double us_x = bg.ustar_dx_at(x);
    const bool need_b1 = us_x != 0.0 || !bg.is_rest();
    if (need_b1) {
      bbar1(g, a, b, m1);
      const double s = svel(t);
      if (us_x != 0.0) f -= s * us_x * (m1 * ab);
      if (!bg.is_rest()) {
        Vector dtu(2), dxu(2);
        dtu << bg.duh_dt(0, t, x), bg.duh_dt(1, t, x);
        dxu << bg.duh_dx(0, t, x), bg.duh_dx(1, t, x);
        f -= m0 * dtu + s * (m1 * dxu);
      }
    }
  };
  sys.f = full_f;

  SingularSplit split;
  split.p_exponent = 1.0;
  const MatrixEval b1copy = sys.b1;
  split.b1_parts[0] = b1copy;  // flux is regular in t
  split.f_parts[2] = [g](double, double, const Vector& v, Vector& f) {
    f = f2_vec(g, v(0), v(1));
  };
  split.f_parts[0] = [full_f, g](double t, double x, const Vector& v, Vector& f) {
    full_f(t, x, v, f);
    f -= f2_vec(g, v(0), v(1)) / t;
  };
  sys.split = split;

  sys.t_min = t_begin;
  sys.t_max = -1e-3;
  sys.x_min = 0.0;
  sys.x_period = 2.0 * M_PI;
  sys.finish_setup();
  return sys;
}

F0AuditReport audit_f0(const FuchsianSystem& sys, int n_x, int n_t) {
  F0AuditReport rep;
  if (!sys.split || !sys.split->f_parts[0]) return rep;
  Vector f(sys.fiber_dim);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Vector> vs;
  for (int i = 0; i < 4; ++i) {
    Vector v(sys.fiber_dim);
    for (int j = 0; j < sys.fiber_dim; ++j) v(j) = uni(rng);
    v *= 0.5 * sys.ball_radius / std::max(v.norm(), 1e-300);
    vs.push_back(v);
  }
  const double lo = std::log(std::abs(sys.t_min)), hi = std::log(1e-6);
  std::vector<double> prev_max(static_cast<size_t>(n_x) * vs.size(), 0.0);
  for (int it = 0; it < n_t; ++it) {
    const double t = -std::exp(lo + (hi - lo) * it / (n_t - 1.0));
    size_t slot = 0;
    for (int ix = 0; ix < n_x; ++ix) {
      const double x = sys.x_min + sys.x_period * ix / n_x;
      for (const auto& v : vs) {
        sys.split->f_parts[0](t, x, v, f);
        if (!f.allFinite()) {
          rep.finite = false;
          return rep;
        }
        const double m = f.cwiseAbs().maxCoeff();
        rep.sup_abs = std::max(rep.sup_abs, m);
        if (it >= (9 * n_t) / 10)
          rep.late_drift = std::max(rep.late_drift, std::abs(m - prev_max[slot]));
        prev_max[slot++] = m;
      }
    }
  }
  if (rep.late_drift > 0.05 * rep.sup_abs + 1e-9) rep.finite = false;
  return rep;
}

namespace {

std::vector<double> make_profile(const std::string& name, const PeriodicGrid& grid,
                                 std::uint64_t seed, int which) {
  std::vector<double> prof(grid.n_points, 0.0);
  if (name == "cosine") {
    for (int j = 0; j < grid.n_points; ++j) prof[j] = std::cos(grid.x(j));
  } else if (name == "sine") {
    for (int j = 0; j < grid.n_points; ++j) prof[j] = std::sin(grid.x(j));
  } else if (name == "random") {
    std::mt19937_64 rng(seed + 1315423911u * which);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double amp[4], phs[4];
    for (int m = 0; m < 4; ++m) {
      amp[m] = gauss(rng) / ((m + 1.0) * (m + 1.0));
      phs[m] = gauss(rng);
    }
    double peak = 0.0;
    for (int j = 0; j < grid.n_points; ++j) {
      double s = 0.0;
      for (int m = 0; m < 4; ++m) s += amp[m] * std::cos((m + 1) * grid.x(j) + phs[m]);
      prof[j] = s;
      peak = std::max(peak, std::abs(s));
    }
    for (auto& v : prof) v /= std::max(peak, 1e-300);
  } else {
    throw DomainError("unknown data_profile: " + name);
  }
  return prof;
}

}  // namespace

StabilityReport run_stability_experiment(const KasnerParams& params, const EulerBackground& bg,
                                         const StabilityConfig& cfg) {
  StabilityReport rep;
  rep.gamma_big = params.big_gamma();
  FuchsianSystem sys = fuchsian_form(bg, params, 0.05, cfg.t_begin);

  PeriodicGrid grid(cfg.n_points, 2.0 * M_PI);
  Field init(grid, 2, cfg.t_begin);
  const auto prof0 = make_profile(cfg.data_profile, grid, cfg.seed, 0);
  const auto prof1 = make_profile(cfg.data_profile, grid, cfg.seed, 1);
  for (int j = 0; j < cfg.n_points; ++j) {
    init.values(0, j) = cfg.delta * prof0[j];
    init.values(1, j) = cfg.delta * prof1[j];
  }
  rep.initial_norm = sobolev_norm(init, cfg.k_reg);

  MonitorConfig mon;
  mon.k_reg = cfg.k_reg;
  mon.store_fields = true;
  mon.identity_residual = true;
  mon.forced_times = {4.0 * cfg.t_floor, 2.0 * cfg.t_floor};
  StepSchedule sched = cfg.schedule;
  sched.t_floor = cfg.t_floor;

  try {
    rep.record = evolve(sys, init, sched, mon);
  } catch (const DomainError&) {
    rep.stable = false;
    return rep;
  }
  rep.stable = !rep.record.aborted;
  if (!rep.stable || rep.record.fields.size() < 3) return rep;

  // P^perp u snapshots at the last three sample times, rate-1 extrapolation
  const Matrix pperp = sys.proj.complement();
  std::vector<Field> snaps;
  for (size_t i = rep.record.fields.size() - 3; i < rep.record.fields.size(); ++i) {
    Field f = rep.record.fields[i];
    f.values = pperp * f.values;
    snaps.push_back(std::move(f));
  }
  const auto ext = lab::limit_extract(snaps, 1.0);
  rep.limit_error_bound = ext.error_bound;
  Eigen::Map<const Matrix> lim(ext.limit.data(), 2, grid.n_points);
  rep.u0_limit = lim.row(0);

  // fitted exponents
  lab::DecaySeries su1, su0;
  su1.label = "Pu_Hkm1";
  su0.label = "u0_deviation_Hkm1";
  for (size_t i = 0; i < rep.record.samples.size(); ++i) {
    const auto& s = rep.record.samples[i];
    su1.times.push_back(s.t);
    su1.values.push_back(s.p_hkm1);
    Field diff = rep.record.fields[i];
    diff.values = pperp * diff.values;
    diff.values.row(0) -= rep.u0_limit;
    su0.times.push_back(s.t);
    su0.values.push_back(sobolev_norm(diff, cfg.k_reg - 1));
  }
  rep.fitted_u1_exponent = lab::fit_power_law(su1, lab::FitWindow::late_window(su1)).exponent;
  // exclude the extrapolation anchor times from the u0 fit tail
  lab::FitWindow w0 = lab::FitWindow::late_window(su0);
  w0.t_b = 8.0 * cfg.t_floor;
  rep.fitted_u0_exponent = lab::fit_power_law(su0, w0).exponent;

  // |V_* - Vhat_*|_{H^{k-1}} with V_* = e^{u_star} (1 + u0(0,.))
  Field vdiff(grid, 1, cfg.t_floor);
  for (int j = 0; j < grid.n_points; ++j)
    vdiff.values(0, j) = std::exp(bg.ustar_at(grid.x(j))) * rep.u0_limit(j);
  rep.vstar_distance = sobolev_norm(vdiff, cfg.k_reg - 1);

  // raw (-t)^{-1} |u1| tail (no limit claimed for it)
  const size_t tail = std::min<size_t>(8, rep.record.samples.size());
  for (size_t i = rep.record.samples.size() - tail; i < rep.record.samples.size(); ++i) {
    const auto& s = rep.record.samples[i];
    rep.u1_over_t_tail.push_back(s.p_hkm1 / std::abs(s.t));
  }
  rep.positivity_ok = rep.stable;
  return rep;
}

}  // namespace euler
}  // namespace fuchsol
