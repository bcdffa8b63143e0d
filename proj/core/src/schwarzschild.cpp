#include "fuchsol/schwarzschild.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fuchsol/fit.hpp"

namespace fuchsol {
namespace wave {
namespace schwarzschild {

void SchwarzschildChart::validate() const {
  if (mu <= 0.0) throw DomainError("SchwarzschildChart: mu must be positive");
  if (rho0 <= 0.0 || rho0 >= 1.0 / 3.0)
    throw DomainError("SchwarzschildChart: rho0 must lie in (0, 1/3)");
  if (m < 2) throw DomainError("SchwarzschildChart: m must be >= 2");
  if (kappa() <= 0.0 || lambda > 1.0)
    throw DomainError("SchwarzschildChart: lambda must lie in ((2+sqrt 2)/4, 1]");
  if (eta <= 0.0 || eta >= 1.0 || 3.0 * rho0 >= eta)
    throw DomainError("SchwarzschildChart: need 0 < 3 rho0 < eta < 1");
}

BackgroundValues background_functions(double t, double r, double mu) {
  if (std::abs(r) >= 1.0 || std::abs(r * t) >= 1.0)
    throw DomainError("background_functions: need |r| < 1 and |r t| < 1");
  BackgroundValues b;
  const double rt = r * t;
  const double op = 1.0 + r, om = 1.0 - r;
  const double opt = 1.0 + rt;
  b.a = op * op * op * (1.0 - rt) / (om * opt * opt * opt);
  // factored form: the (1 - rt) of A cancels against 1 - (rt)^2
  b.script_a = 1.0 - t * (1.0 - 2.0 * rt) * op * op * op / (om * opt * opt * opt * opt);
  b.omega = r == 0.0 ? std::numeric_limits<double>::infinity()
                     : mu * opt * opt / (2.0 * rt);
  b.ricci = 24.0 * rt / (opt * opt);
  return b;
}

namespace {

double poly_long(double t, double r) {
  // 1 - r - t(r + 6 r^2 + r^3) + t^2 (r^4 - r^3)
  return 1.0 - r - t * (r + 6.0 * r * r + r * r * r) +
         t * t * (r * r * r * r - r * r * r);
}

struct CoreMats {
  Matrix b0, b1, bc;
  double a = 1.0, scr = 0.0, d = 1.0;  // A, scriptA, 2 - tA
};

// the displayed (corrected) matrices at one (t, r), per-field blocks
CoreMats core_matrices(double t, double r, const SchwarzschildChart& chart) {
  const WaveLayout L{chart.n_fields};
  const int n = chart.n_fields;
  const double lam = chart.lambda;
  const auto bg = background_functions(t, r, chart.mu);
  const double A = bg.a, scr = bg.script_a;
  const double D = 2.0 - t * A;
  if (D <= 0.0) throw DomainError("schwarzschild: hyperbolicity domain 2 - tA > 0 violated");
  const double P = (2.0 * t - 2.0 - t * t * A) / D;
  CoreMats c;
  c.a = A;
  c.scr = scr;
  c.d = D;
  c.b0.setZero(L.fiber(), L.fiber());
  c.b1.setZero(L.fiber(), L.fiber());
  c.bc.setZero(L.fiber(), L.fiber());
  for (int j = 0; j < n; ++j) {
    c.b0(L.idx(0, j), L.idx(0, j)) = 0.5;
    c.b0(L.idx(1, j), L.idx(1, j)) = -2.0 * P;  // = 2 (2 - 2t + t^2 A)/(2 - tA)
    c.b0(L.idx(2, j), L.idx(2, j)) = 2.0 * A / D;
    c.b0(L.idx(3, j), L.idx(3, j)) = 1.0;

    c.b1(L.idx(0, j), L.idx(0, j)) = P / (2.0 * t);
    c.b1(L.idx(0, j), L.idx(1, j)) = P / std::sqrt(t);
    c.b1(L.idx(1, j), L.idx(0, j)) = P / std::sqrt(t);
    c.b1(L.idx(1, j), L.idx(1, j)) = 2.0 * P;
    c.b1(L.idx(2, j), L.idx(2, j)) = -2.0 * A / D;

    c.bc(L.idx(0, j), L.idx(0, j)) = (0.5 * (lam + 0.5) * D - scr) / D;
    c.bc(L.idx(1, j), L.idx(1, j)) = -2.0 * lam * P;
    c.bc(L.idx(2, j), L.idx(2, j)) = 2.0 * lam * A / D;
    c.bc(L.idx(3, j), L.idx(0, j)) = 0.5;
    c.bc(L.idx(3, j), L.idx(3, j)) = lam - 0.5;
  }
  return c;
}

void fill_csc(double t, double r, const SchwarzschildChart& chart, Matrix& csc) {
  const WaveLayout L{chart.n_fields};
  const auto bg = background_functions(t, r, chart.mu);
  const double D = 2.0 - t * bg.a;
  csc.setZero(L.fiber(), L.fiber());
  for (int j = 0; j < chart.n_fields; ++j) {
    csc(L.idx(0, j), L.idx(1, j)) = -2.0 * bg.script_a / D;
    csc(L.idx(3, j), L.idx(1, j)) = 1.0;
  }
}

void fill_bsc(double t, double r, const Vector& U, const SchwarzschildChart& chart,
              const Nonlinearity& q, Matrix& bsc) {
  const int n = chart.n_fields;
  const WaveLayout L{n};
  const double lam = chart.lambda, mu = chart.mu;
  const auto bg = background_functions(t, r, mu);
  const double A = bg.a, D = 2.0 - t * A;
  const double rt = r * t, opt = 1.0 + rt, op = 1.0 + r;
  const double opt2 = opt * opt;
  bsc.setZero(L.fiber(), L.fiber());

  Vector ubar(n);
  const double ubar_scale = 2.0 * r * std::pow(t, 1.5 - lam) / (mu * opt2);
  for (int j = 0; j < n; ++j) ubar(j) = ubar_scale * U(L.idx(3, j));
  std::vector<double> qc;
  q.eval(ubar, qc);

  const double pl = poly_long(t, r);
  const double op3 = op * op * op;
  const double a_u0 = -0.5 * r * std::pow(t, 1.5 - lam) / (mu * opt2);
  const double a_u1 = -2.0 * r * std::pow(t, 1.0 - lam) * (1.0 - 2.0 * t - t * t * A) /
                      (mu * opt2 * D * D);
  const double b_u1 = -2.0 * std::pow(t, 1.5 - lam) * r * (2.0 - 2.0 * t + t * t * A) /
                      (mu * D * opt2);
  const double b_u4 = -4.0 * r * std::pow(t, 1.0 - lam) *
                      ((1.0 - rt) * op3 + A * t * (t - 1.0) * pl) /
                      (mu * D * op3 * opt2 * opt);
  const double s_ul = -2.0 * r * A * std::pow(t, 1.5 - lam) / (mu * D * opt2);
  const double c_u4 = -2.0 * std::pow(t, 2.5 - lam) * r * (1.0 - rt) * (1.0 - rt) * A /
                      (mu * D * opt2 * opt2);
  const double c_u0 = -4.0 * r * A * std::pow(t, 1.5 - lam) * (t - 1.0) * pl /
                      (mu * D * op3 * opt2 * opt);

  for (int K = 0; K < n; ++K)
    for (int J = 0; J < n; ++J) {
      double e0 = 0, e1 = 0, e2 = 0, e4 = 0;
      for (int I = 0; I < n; ++I) {
        const double qk = qc[(K * n + I) * n + J];
        if (qk == 0.0) continue;
        e0 += qk * (a_u0 * U(L.idx(0, I)) + a_u1 * U(L.idx(1, I)));
        e1 += qk * (b_u1 * U(L.idx(1, I)) + b_u4 * U(L.idx(3, I)));
        e2 += qk * s_ul * U(L.idx(2, I));
        e4 += qk * (c_u4 * U(L.idx(3, I)) + c_u0 * U(L.idx(0, I)));
      }
      bsc(L.idx(0, K), L.idx(0, J)) = e0;
      bsc(L.idx(0, K), L.idx(1, J)) = e1;
      bsc(L.idx(0, K), L.idx(2, J)) = e2;
      bsc(L.idx(0, K), L.idx(3, J)) = e4;
    }
}

void fill_f_regular(double t, double r, const Vector& U, const SchwarzschildChart& chart,
                    Vector& f) {
  const WaveLayout L{chart.n_fields};
  const auto bg = background_functions(t, r, chart.mu);
  const double D = 2.0 - t * bg.a;
  const double rt = r * t;
  const double w = -4.0 * r * t * bg.a / (D * (1.0 + rt) * (1.0 + rt));
  f.setZero(L.fiber());
  for (int j = 0; j < chart.n_fields; ++j) f(L.idx(0, j)) = w * U(L.idx(3, j));
}

// regular/singular split parts of B^1 (paper time):
// B^1 = B_0 + t^{-1/2} B_1 + t^{-1} B_2 with
//   B_0 = [[1/2, sqrt t; sqrt t, 2t], -2A/D on the angular slot]
//   B_1 = [[0, -2/D; -2/D, 0]],  B_2 = [[-1/D, 0; 0, -4/D]]
void b1_parts_at(double t, double r, const SchwarzschildChart& chart, Matrix& p0, Matrix& p1,
                 Matrix& p2) {
  const WaveLayout L{chart.n_fields};
  const auto bg = background_functions(t, r, chart.mu);
  const double A = bg.a, D = 2.0 - t * A;
  p0.setZero(L.fiber(), L.fiber());
  p1.setZero(L.fiber(), L.fiber());
  p2.setZero(L.fiber(), L.fiber());
  for (int j = 0; j < chart.n_fields; ++j) {
    p0(L.idx(0, j), L.idx(0, j)) = 0.5;
    p0(L.idx(0, j), L.idx(1, j)) = std::sqrt(t);
    p0(L.idx(1, j), L.idx(0, j)) = std::sqrt(t);
    p0(L.idx(1, j), L.idx(1, j)) = 2.0 * t;
    p0(L.idx(2, j), L.idx(2, j)) = -2.0 * A / D;
    p1(L.idx(0, j), L.idx(1, j)) = -2.0 / D;
    p1(L.idx(1, j), L.idx(0, j)) = -2.0 / D;
    p2(L.idx(0, j), L.idx(0, j)) = -1.0 / D;
    p2(L.idx(1, j), L.idx(1, j)) = -4.0 / D;
  }
}

}  // namespace

FirstOrderCoeffs first_order_coeffs(double t, double rho, const Vector& U,
                                    const SchwarzschildChart& chart, const Nonlinearity& q) {
  chart.validate();
  if (t <= 0.0 || t > 1.0) throw DomainError("first_order_coeffs: t in (0,1]");
  const double r = std::pow(rho, chart.m);
  const auto c = core_matrices(t, r, chart);
  FirstOrderCoeffs out;
  out.b0 = c.b0;
  out.b1 = c.b1;
  out.bc = c.bc;
  fill_csc(t, r, chart, out.csc);
  fill_bsc(t, r, U, chart, q, out.bsc);
  out.bsc_norm = out.bsc.cwiseAbs().maxCoeff();
  fill_f_regular(t, r, U, chart, out.f_regular);
  return out;
}

FrozenCoeffs frozen_coeffs(double t, const SchwarzschildChart& chart) {
  const auto c = core_matrices(t, 0.0, chart);
  return {c.b0, c.bc};
}

PeriodicGrid make_grid(const SchwarzschildChart& chart, int n_points) {
  return PeriodicGrid(n_points, 6.0 * chart.rho0, -3.0 * chart.rho0);
}

FuchsianSystem extend_system(const SchwarzschildChart& chart, const Nonlinearity& q,
                             AuditReport* audit) {
  chart.validate();
  const WaveLayout L{chart.n_fields};
  const double rho0 = chart.rho0;
  const double m = chart.m;
  auto chi = [rho0](double rho) { return smooth_cutoff(rho / rho0); };
  const SchwarzschildChart ch = chart;
  const Nonlinearity qq = q;

  FuchsianSystem sys;
  sys.name = "wave-schwarzschild";
  sys.fiber_dim = L.fiber();
  sys.proj = ProjectionPair::identity(L.fiber());
  sys.ball_radius = 1.0;

  sys.b0 = [ch, chi](double s, double rho, const Vector&, Matrix& out) {
    const double t = -s;
    const auto frozen = core_matrices(t, 0.0, ch);
    out = frozen.b0;
    const double c = chi(rho);
    if (c > 0.0) out += c * (core_matrices(t, std::pow(rho, ch.m), ch).b0 - frozen.b0);
  };
  sys.b1 = [ch, chi, m](double s, double rho, const Vector&, Matrix& out) {
    const double t = -s;
    const auto frozen = core_matrices(t, 0.0, ch);
    out = frozen.b1;
    const double c = chi(rho);
    if (c > 0.0) out += c * (core_matrices(t, std::pow(rho, ch.m), ch).b1 - frozen.b1);
    out *= -c * rho / m;  // time flip and cutoff flux weight
  };
  sys.bc = [ch, chi, qq](double s, double rho, const Vector& v, Matrix& out) {
    const double t = -s;
    const auto frozen = core_matrices(t, 0.0, ch);
    out = frozen.bc;
    const double c = chi(rho);
    if (c == 0.0) return;
    const double r = std::pow(rho, ch.m);
    out += c * (core_matrices(t, r, ch).bc - frozen.bc);
    Matrix csc, bsc;
    fill_csc(t, r, ch, csc);
    fill_bsc(t, r, v, ch, qq, bsc);
    out += c * (std::sqrt(t) * csc + bsc);
  };
  sys.f = [ch, chi](double s, double rho, const Vector& v, Vector& out) {
    const double t = -s;
    const double c = chi(rho);
    if (c == 0.0) {
      out.setZero(v.size());
      return;
    }
    fill_f_regular(t, std::pow(rho, ch.m), v, ch, out);
    out *= -c;
  };

  SingularSplit split;
  split.p_exponent = 1.0;
  for (int a = 0; a < 3; ++a) {
    split.b1_parts[a] = [ch, chi, m, a](double s, double rho, const Vector&, Matrix& out) {
      const double t = -s;
      Matrix p0, p1, p2;
      b1_parts_at(t, 0.0, ch, p0, p1, p2);
      const Matrix* frozen[3] = {&p0, &p1, &p2};
      out = *frozen[a];
      const double c = chi(rho);
      if (c > 0.0) {
        Matrix q0, q1, q2;
        b1_parts_at(t, std::pow(rho, ch.m), ch, q0, q1, q2);
        const Matrix* raw[3] = {&q0, &q1, &q2};
        out += c * (*raw[a] - *frozen[a]);
      }
      out *= -c * rho / m;
    };
  }
  split.f_parts[0] = sys.f;
  sys.split = split;

  sys.t_min = -1.0;
  sys.t_max = -1e-3;
  sys.x_min = -3.0 * rho0;
  sys.x_period = 6.0 * rho0;
  sys.finish_setup();

  if (audit) {
    audit->pass = true;
    audit->findings.clear();
    // Taylor slopes of max|B0 - B0*| and max|Bc - Bc*| over rho in [1e-3, 1e-1]
    lab::DecaySeries sb0, sbc;
    const int nfit = 17;
    double taylor_c = 0.0;
    for (int i = 0; i < nfit; ++i) {
      const double rho = std::pow(10.0, -3.0 + 2.0 * i / (nfit - 1.0));
      double d0 = 0.0, dc = 0.0;
      for (int it = 1; it <= 8; ++it) {
        const double t = it / 8.0;
        const auto frozen = core_matrices(t, 0.0, chart);
        const auto raw = core_matrices(t, std::pow(rho, chart.m), chart);
        d0 = std::max(d0, (raw.b0 - frozen.b0).cwiseAbs().maxCoeff());
        dc = std::max(dc, (raw.bc - frozen.bc).cwiseAbs().maxCoeff());
      }
      sb0.times.push_back(-rho);  // reuse the log-log fitter on |.|
      sb0.values.push_back(d0);
      sbc.times.push_back(-rho);
      sbc.values.push_back(dc);
      taylor_c = std::max(taylor_c, std::max(d0, dc) / (rho * rho));
    }
    lab::FitWindow full{-1.0, -1e-4};
    audit->slope_b0 = lab::fit_power_law(sb0, full).exponent;
    audit->slope_bc = lab::fit_power_law(sbc, full).exponent;
    audit->taylor_const = taylor_c;

    // measured gradient and coercivity bounds over a (t, rho) grid
    Matrix m0a(L.fiber(), L.fiber()), m0b(L.fiber(), L.fiber());
    Matrix mca(L.fiber(), L.fiber()), mcb(L.fiber(), L.fiber());
    const Vector v0 = Vector::Zero(L.fiber());
    double sup0 = 0.0, supc = 0.0, supflux = 0.0;
    double coer = std::numeric_limits<double>::infinity();
    const double hr = 1e-6 * rho0;
    Matrix f1a(L.fiber(), L.fiber()), f1b(L.fiber(), L.fiber());
    for (int it = 1; it <= 10; ++it) {
      const double s = -it / 10.0;
      for (int ir = 0; ir <= 120; ++ir) {
        const double rho = -3.0 * rho0 + 6.0 * rho0 * ir / 120.0;
        sys.b0(s, rho + hr, v0, m0a);
        sys.b0(s, rho - hr, v0, m0b);
        sup0 = std::max(sup0, (m0a - m0b).cwiseAbs().maxCoeff() / (2.0 * hr));
        sys.bc(s, rho + hr, v0, mca);
        sys.bc(s, rho - hr, v0, mcb);
        supc = std::max(supc, (mca - mcb).cwiseAbs().maxCoeff() / (2.0 * hr));
        sys.b1(s, rho + hr, v0, f1a);
        sys.b1(s, rho - hr, v0, f1b);
        // b1 is already the flux coefficient -(chi rho/m) B~1; the bound is on t * it
        supflux = std::max(supflux,
                           std::abs(s) * (f1a - f1b).cwiseAbs().maxCoeff() / (2.0 * hr));
        sys.b0(s, rho, v0, m0a);
        sys.bc(s, rho, v0, mca);
        const Matrix sc = 0.5 * (mca + mca.transpose());
        Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sc, m0a);
        coer = std::min(coer, es.eigenvalues().minCoeff());
      }
    }
    audit->sup_drho_b0 = sup0;
    audit->sup_drho_bc = supc;
    audit->flux_gradient_sup = supflux;
    audit->coercivity_min = coer;
    audit->coercivity_margin = coer - (chart.kappa() - chart.sigma_target);
    audit->chosen_m = std::max<int>(
        2, static_cast<int>(std::ceil(supflux * chart.m / chart.sigma_target)));
    audit->chosen_rho0 =
        std::min(chart.eta / 3.0, chart.sigma_target / (3.0 * std::max(taylor_c, 1e-300)));

    if (std::abs(audit->slope_b0 - chart.m) > 0.5)
      audit->findings.push_back("taylor slope of B0 deviates from m");
    if (std::abs(audit->slope_bc - chart.m) > 0.5)
      audit->findings.push_back("taylor slope of Bc deviates from m");
    if (audit->coercivity_margin < 0.0)
      audit->findings.push_back("coercivity below kappa - sigma");
    audit->pass = audit->findings.empty();
  }
  return sys;
}

Field initial_data(const SchwarzschildChart& chart, const PeriodicGrid& grid, double delta,
                   bool outside_bump) {
  const WaveLayout L{chart.n_fields};
  Field f(grid, L.fiber(), -1.0);
  const double rho0 = chart.rho0;
  auto bump = [](double xi) {
    const double s = xi * xi;
    return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
  };
  auto bump_dx = [&bump](double xi) {
    const double s = xi * xi;
    if (s >= 1.0) return 0.0;
    const double d = 1.0 - s;
    return bump(xi) * (-2.0 * xi / (d * d));
  };
  const double c1 = 0.5 * rho0, w1 = 0.35 * rho0;
  const double c2 = -1.5 * rho0, w2 = 0.6 * rho0;
  for (int j = 0; j < grid.n_points; ++j) {
    const double rho = grid.x(j);
    for (int k = 0; k < chart.n_fields; ++k) {
      double u4 = delta * bump((rho - c1) / w1);
      double u1 = (rho / chart.m) * delta * bump_dx((rho - c1) / w1) / w1;
      if (outside_bump) {
        u4 += delta * bump((rho - c2) / w2);
        u1 += (rho / chart.m) * delta * bump_dx((rho - c2) / w2) / w2;
      }
      f.values(L.idx(3, k), j) = u4;
      f.values(L.idx(1, k), j) = u1;
    }
  }
  return f;
}

double boundary_form(const SchwarzschildChart& chart, double t, double rho, const Vector& V) {
  chart.validate();
  const double tol = 1e-9;
  const bool on_minus = std::abs(rho) <= tol;
  const bool on_plus = std::abs(rho - chart.rho0) <= tol;
  if (!on_minus && !on_plus)
    throw DomainError("boundary_form: point is on neither Gamma^- nor Gamma^+");
  if (on_minus) return 0.0;  // flux weight chi rho/m vanishes at rho = 0
  // + d rho conormal: (rho0/m) h(V, B^1 V), chi(rho0) = 1 and B~1 = B1 there
  const auto c = core_matrices(t, std::pow(rho, chart.m), chart);
  return (chart.rho0 / chart.m) * V.dot(c.b1 * V);
}

double restriction_independence(const SchwarzschildChart& chart, const Nonlinearity& q,
                                const DecayRunConfig& cfg) {
  FuchsianSystem sys = extend_system(chart, q);
  const PeriodicGrid grid = make_grid(chart, cfg.n_points);
  StepSchedule sched = cfg.schedule;
  sched.t_floor = cfg.s_floor;
  MonitorConfig mon;
  mon.k_reg = cfg.k_reg;

  const Field a0 = initial_data(chart, grid, cfg.delta, false);
  const Field b0 = initial_data(chart, grid, cfg.delta, true);
  const RunRecord ra = evolve(sys, a0, sched, mon);
  const RunRecord rb = evolve(sys, b0, sched, mon);
  if (ra.aborted || rb.aborted)
    throw DomainError("restriction_independence: run aborted");

  double worst = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    const double rho = grid.x(j);
    if (rho < 0.0 || rho > chart.rho0) continue;
    worst = std::max(worst,
                     (ra.final_state.values.col(j) - rb.final_state.values.col(j))
                         .cwiseAbs()
                         .maxCoeff());
  }
  return worst;
}

}  // namespace schwarzschild
}  // namespace wave
}  // namespace fuchsol
