#include "fuchsol/minkowski.hpp"

#include <cmath>
#include <random>

namespace fuchsol {
namespace wave {
namespace minkowski {

void MinkowskiChart::validate() const {
  if (r0 <= 0.0) throw DomainError("MinkowskiChart: r0 must be positive");
  if (m < 1) throw DomainError("MinkowskiChart: m must be a positive integer");
  if (kappa() <= 0.0 || lambda > 1.0)
    throw DomainError("MinkowskiChart: lambda must lie in ((2+sqrt 2)/4, 1]");
  if (n_fields < 1) throw DomainError("MinkowskiChart: n_fields must be positive");
}

ConformalData conformal_data(double t, double r) {
  if (t <= 0.0 || t > 1.0 || r <= 0.0)
    throw DomainError("conformal_data: need t in (0,1], r > 0");
  ConformalData d;
  d.omega = 1.0 / (r * (2.0 - t) * t);
  d.g = Matrix::Zero(2, 2);
  d.g(0, 0) = -1.0;
  d.g(0, 1) = d.g(1, 0) = (1.0 - t) / r;
  d.g(1, 1) = (2.0 - t) * t / (r * r);
  d.ricci_scalar = 0.0;
  return d;
}

std::pair<double, double> chart_map(double tbar, double rbar) {
  if (rbar * rbar - tbar * tbar <= 0.0 || rbar <= 0.0)
    throw DomainError("chart_map: point outside the spacelike cone");
  return {1.0 - tbar / rbar, rbar / (rbar * rbar - tbar * tbar)};
}

std::pair<double, double> chart_map_inverse(double t, double r) {
  if (t <= 0.0 || t >= 2.0 || r <= 0.0)
    throw DomainError("chart_map_inverse: need t in (0,2), r > 0");
  // t = 1 - tbar/rbar, r = rbar/(rbar^2 - tbar^2)
  const double ratio = 1.0 - t;  // tbar/rbar
  const double rbar = 1.0 / (r * (1.0 - ratio * ratio));
  return {ratio * rbar, rbar};
}

namespace {

// first block-row of the quadratic source matrix Bsc
void fill_bsc(const MinkowskiChart& chart, const Nonlinearity& q, double t, double r,
              const Vector& U, Matrix& bsc) {
  const int n = chart.n_fields;
  const WaveLayout L{n};
  const double lam = chart.lambda;
  bsc.setZero(L.fiber(), L.fiber());
  const double ubar_scale = r * (2.0 - t) * std::pow(t, 1.5 - lam);
  Vector ubar(n);
  for (int j = 0; j < n; ++j) ubar(j) = ubar_scale * U(L.idx(3, j));
  std::vector<double> qc;
  q.eval(ubar, qc);

  const double a0 = r * (t - 2.0) * (t - 2.0) * std::pow(t, 1.5 - lam);
  const double a1 = -2.0 * r * (2.0 - 3.0 * t + t * t) * std::pow(t, 1.0 - lam);
  const double b1 = -2.0 * r * (2.0 - 2.0 * t + t * t) * std::pow(t, 1.0 - lam);
  const double b2 = r * (t - 2.0) * std::pow(t, 1.5 - lam);
  const double s1 = r * (t - 2.0) * std::pow(t, 1.5 - lam);
  const double c0 = r * (t - 2.0) * std::pow(t, 2.5 - lam);
  const double c1 = 2.0 * r * (2.0 - 3.0 * t + t * t) * std::pow(t, 1.5 - lam);

  for (int K = 0; K < n; ++K)
    for (int J = 0; J < n; ++J) {
      double e0 = 0, e1 = 0, e2 = 0, e4 = 0;
      for (int I = 0; I < n; ++I) {
        const double qk = qc[(K * n + I) * n + J];
        if (qk == 0.0) continue;
        e0 += qk * (a0 * U(L.idx(0, I)) + a1 * U(L.idx(1, I)));
        e1 += qk * (b1 * U(L.idx(3, I)) + b2 * U(L.idx(1, I)));
        e2 += qk * s1 * U(L.idx(2, I));
        e4 += qk * (c0 * U(L.idx(3, I)) + c1 * U(L.idx(0, I)));
      }
      bsc(L.idx(0, K), L.idx(0, J)) = e0;
      bsc(L.idx(0, K), L.idx(1, J)) = e1;
      bsc(L.idx(0, K), L.idx(2, J)) = e2;
      bsc(L.idx(0, K), L.idx(3, J)) = e4;
    }
}

void fill_bc_base(const MinkowskiChart& chart, Matrix& bc) {
  const int n = chart.n_fields;
  const WaveLayout L{n};
  const double lam = chart.lambda;
  bc.setZero(L.fiber(), L.fiber());
  for (int j = 0; j < n; ++j) {
    bc(L.idx(0, j), L.idx(0, j)) = 2.0 * (lam - 0.5);
    bc(L.idx(1, j), L.idx(1, j)) = lam;
    bc(L.idx(2, j), L.idx(2, j)) = lam;
    bc(L.idx(3, j), L.idx(3, j)) = lam - 0.5;
    bc(L.idx(3, j), L.idx(0, j)) = 1.0;
  }
}

}  // namespace

FirstOrderCoeffs first_order_coeffs(double t, double rho, const Vector& U,
                                    const MinkowskiChart& chart, const Nonlinearity& q) {
  chart.validate();
  if (t <= 0.0 || t > 1.0) throw DomainError("first_order_coeffs: t in (0,1]");
  if (chart.lambda > 1.0)
    throw DomainError("first_order_coeffs: Bsc bound requires lambda <= 1");
  const int n = chart.n_fields;
  const WaveLayout L{n};
  const double r = std::pow(rho, chart.m);
  FirstOrderCoeffs c;
  c.b0.setZero(L.fiber(), L.fiber());
  c.b1.setZero(L.fiber(), L.fiber());
  for (int j = 0; j < n; ++j) {
    c.b0(L.idx(0, j), L.idx(0, j)) = 2.0 - t;
    c.b0(L.idx(1, j), L.idx(1, j)) = 1.0;
    c.b0(L.idx(2, j), L.idx(2, j)) = 1.0;
    c.b0(L.idx(3, j), L.idx(3, j)) = 1.0;
    c.b1(L.idx(0, j), L.idx(0, j)) = 2.0 * (t - 1.0) / t;
    c.b1(L.idx(0, j), L.idx(1, j)) = -1.0 / std::sqrt(t);
    c.b1(L.idx(1, j), L.idx(0, j)) = -1.0 / std::sqrt(t);
  }
  fill_bc_base(chart, c.bc);
  c.csc.setZero(L.fiber(), L.fiber());
  for (int j = 0; j < n; ++j) c.csc(L.idx(0, j), L.idx(1, j)) = -1.0;
  fill_bsc(chart, q, t, r, U, c.bsc);
  c.bsc_norm = c.bsc.cwiseAbs().maxCoeff();
  c.f_regular.setZero(L.fiber());
  for (int j = 0; j < n; ++j)
    c.f_regular(L.idx(0, j)) = (1.5 - chart.lambda) * U(L.idx(0, j));
  return c;
}

CoercivityReport coercivity_check(const MinkowskiChart& chart, int n_samples,
                                  std::uint64_t seed) {
  CoercivityReport rep;
  rep.kappa = chart.kappa();
  const double threshold = 0.25 * (2.0 + std::sqrt(2.0));
  rep.applicable = chart.lambda >= threshold && chart.lambda <= 1.0;
  if (!rep.applicable) return rep;

  const int n = chart.n_fields;
  const WaveLayout L{n};
  Matrix bc;
  fill_bc_base(chart, bc);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double t = uni(rng);
    Vector v(L.fiber());
    for (int j = 0; j < L.fiber(); ++j) v(j) = gauss(rng);
    v.normalize();
    double hb0 = 0.0;
    for (int j = 0; j < n; ++j)
      hb0 += (2.0 - t) * v(L.idx(0, j)) * v(L.idx(0, j)) +
             v(L.idx(1, j)) * v(L.idx(1, j)) + v(L.idx(2, j)) * v(L.idx(2, j)) +
             v(L.idx(3, j)) * v(L.idx(3, j));
    const double hbc = v.dot(bc * v);
    rep.min_ratio = std::min(rep.min_ratio, hbc / hb0);
  }
  rep.pass = rep.min_ratio >= rep.kappa - 1e-12;
  return rep;
}

PeriodicGrid make_grid(const MinkowskiChart& chart, int n_points) {
  const double rho0 = chart.rho0();
  return PeriodicGrid(n_points, 6.0 * rho0, -3.0 * rho0);
}

FuchsianSystem extend_system(const MinkowskiChart& chart, const Nonlinearity& q,
                             ExtensionReport* report) {
  chart.validate();
  const int n = chart.n_fields;
  const WaveLayout L{n};
  const double rho0 = chart.rho0();
  const double m = chart.m;
  const double lam = chart.lambda;
  auto chi = [rho0](double rho) { return smooth_cutoff(rho / rho0); };

  FuchsianSystem sys;
  sys.name = "wave-minkowski";
  sys.fiber_dim = L.fiber();
  sys.proj = ProjectionPair::identity(L.fiber());
  sys.ball_radius = 1.0;

  sys.b0 = [n, L](double s, double, const Vector&, Matrix& out) {
    const double t = -s;
    out = Matrix::Identity(L.fiber(), L.fiber());
    for (int j = 0; j < n; ++j) out(L.idx(0, j), L.idx(0, j)) = 2.0 - t;
  };
  // flux already time-flipped: b1 = -(chi rho / m) B^1(|s|)
  sys.b1 = [n, L, m, chi](double s, double rho, const Vector&, Matrix& out) {
    const double t = -s;
    const double w = -chi(rho) * rho / m;
    out.setZero(L.fiber(), L.fiber());
    for (int j = 0; j < n; ++j) {
      out(L.idx(0, j), L.idx(0, j)) = w * 2.0 * (t - 1.0) / t;
      out(L.idx(0, j), L.idx(1, j)) = -w / std::sqrt(t);
      out(L.idx(1, j), L.idx(0, j)) = -w / std::sqrt(t);
    }
  };
  // the (1/t)(sqrt(t) Csc + Bsc) U source joins the Bc P u term
  const MinkowskiChart ch = chart;
  const Nonlinearity qq = q;
  sys.bc = [ch, qq, n, L, m, chi](double s, double rho, const Vector& v, Matrix& out) {
    const double t = -s;
    fill_bc_base(ch, out);
    const double c = chi(rho);
    if (c == 0.0) return;
    const double sq = std::sqrt(t);
    for (int j = 0; j < n; ++j) out(L.idx(0, j), L.idx(1, j)) += c * sq * (-1.0);
    Matrix bsc;
    fill_bsc(ch, qq, t, std::pow(rho, ch.m), v, bsc);
    out += c * bsc;
  };
  sys.f = [n, L, lam, chi](double s, double rho, const Vector& v, Vector& out) {
    const double t = -s;
    (void)t;
    out.setZero(L.fiber());
    const double c = chi(rho);
    if (c == 0.0) return;
    for (int j = 0; j < n; ++j)
      out(L.idx(0, j)) = -c * (1.5 - lam) * v(L.idx(0, j));
  };

  SingularSplit split;
  split.p_exponent = 1.0;
  split.b1_parts[0] = [n, L, m, chi](double, double rho, const Vector&, Matrix& out) {
    const double w = -chi(rho) * rho / m;
    out.setZero(L.fiber(), L.fiber());
    for (int j = 0; j < n; ++j) out(L.idx(0, j), L.idx(0, j)) = 2.0 * w;
  };
  split.b1_parts[1] = [n, L, m, chi](double, double rho, const Vector&, Matrix& out) {
    const double w = -chi(rho) * rho / m;
    out.setZero(L.fiber(), L.fiber());
    for (int j = 0; j < n; ++j) {
      out(L.idx(0, j), L.idx(1, j)) = -w;
      out(L.idx(1, j), L.idx(0, j)) = -w;
    }
  };
  split.b1_parts[2] = [n, L, m, chi](double, double rho, const Vector&, Matrix& out) {
    const double w = -chi(rho) * rho / m;
    out.setZero(L.fiber(), L.fiber());
    for (int j = 0; j < n; ++j) out(L.idx(0, j), L.idx(0, j)) = -2.0 * w;
  };
  split.f_parts[0] = sys.f;
  sys.split = split;

  sys.t_min = -1.0;
  sys.t_max = -1e-3;
  sys.x_min = -3.0 * rho0;
  sys.x_period = 6.0 * rho0;
  sys.finish_setup();

  if (report) {
    // sup over (t, rho) of |d_rho ( t (chi rho / m) B^1 )|, elementwise max;
    // the only rho dependence is through chi(rho) rho.
    double sup = 0.0;
    const int nrho = 600;
    for (int i = 0; i <= nrho; ++i) {
      const double rho = -3.0 * rho0 + 6.0 * rho0 * i / nrho;
      const double h = 1e-6 * rho0;
      const double d_chirho =
          (chi(rho + h) * (rho + h) - chi(rho - h) * (rho - h)) / (2.0 * h);
      // sup_t |t B^1| entrywise: |2(t-1)| <= 2, |sqrt(t)| <= 1 on (0,1]
      const double tb1 = 2.0;
      sup = std::max(sup, std::abs(d_chirho) / m * tb1);
    }
    report->flux_gradient_sup = sup;
    report->m_for_sigma =
        std::max(1, static_cast<int>(std::ceil(sup * m / report->sigma_target)));
  }
  return sys;
}

double boundary_form(const MinkowskiChart& chart, double t, double rho, const Vector& V) {
  chart.validate();
  const double rho0 = chart.rho0();
  const double m = chart.m;
  const Nonlinearity q = Nonlinearity::scalar(0.0);
  const double tol = 1e-9;
  const bool on_minus = std::abs(rho) <= tol;
  const bool on_plus =
      rho > 0.0 && std::abs((2.0 - t) - std::pow(rho0 / rho, m)) <= tol * std::abs(2.0 - t);
  if (!on_minus && !on_plus)
    throw DomainError("boundary_form: point is on neither Gamma^- nor Gamma^+");

  Vector dummy = Vector::Zero(4 * chart.n_fields);
  const auto c = first_order_coeffs(t, std::max(rho, 1e-12), dummy, chart, q);
  const double chi = smooth_cutoff(rho / rho0);
  Matrix form;
  if (on_minus) {
    // n^- = -d rho: only the flux contributes, weight chi rho / m = 0 at rho = 0
    form = -(chi * rho / m) * c.b1;
  } else {
    // n^+ = -dt + m rho0^m / rho^{m+1} d rho acting on (B^0, (chi rho/m) B^1)
    const double n1 = m * std::pow(rho0, m) / std::pow(rho, m + 1);
    form = -c.b0 + n1 * (chi * rho / m) * c.b1;
  }
  return V.dot(form * V);
}

Reconstruction reconstruct_scalar(const Vector& U, double t, double rho,
                                  const MinkowskiChart& chart) {
  const int n = chart.n_fields;
  const WaveLayout L{n};
  Reconstruction rec;
  rec.u.resize(n);
  rec.u_bar.resize(n);
  const double r = std::pow(rho, chart.m);
  for (int j = 0; j < n; ++j) {
    rec.u(j) = std::pow(t, 0.5 - chart.lambda) * U(L.idx(3, j));
    rec.u_bar(j) = r * t * (2.0 - t) * rec.u(j);
  }
  return rec;
}

namespace {

double bump(double xi) {
  const double s = xi * xi;
  return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
}
double bump_dx(double xi) {
  const double s = xi * xi;
  if (s >= 1.0) return 0.0;
  const double d = 1.0 - s;
  return bump(xi) * (-2.0 * xi / (d * d));
}

}  // namespace

Field initial_data(const MinkowskiChart& chart, const PeriodicGrid& grid, double delta,
                   bool outside_bump) {
  const int n = chart.n_fields;
  const WaveLayout L{n};
  Field f(grid, L.fiber(), -1.0);
  const double rho0 = chart.rho0();
  const double c1 = 0.5 * rho0, w1 = 0.35 * rho0;
  const double c2 = -1.5 * rho0, w2 = 0.6 * rho0;
  for (int j = 0; j < grid.n_points; ++j) {
    const double rho = grid.x(j);
    for (int k = 0; k < n; ++k) {
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

double restriction_independence(const MinkowskiChart& chart, const Nonlinearity& q,
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

  const double t_paper = std::abs(cfg.s_floor);
  const double rho_max = chart.rho0() / std::pow(2.0 - t_paper, 1.0 / chart.m);
  double worst = 0.0;
  for (int j = 0; j < grid.n_points; ++j) {
    const double rho = grid.x(j);
    if (rho < 0.0 || rho > rho_max) continue;
    worst = std::max(worst,
                     (ra.final_state.values.col(j) - rb.final_state.values.col(j))
                         .cwiseAbs()
                         .maxCoeff());
  }
  return worst;
}

}  // namespace minkowski
}  // namespace wave
}  // namespace fuchsol
