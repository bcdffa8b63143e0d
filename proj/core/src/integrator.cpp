#include "fuchsol/integrator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include "fuchsol/div_b.hpp"

namespace fuchsol {

namespace {

struct RhsWorkspace {
  Matrix du, b0, b1, bc;
  Vector v, rhs, fv;
};

void rhs_into(const FuchsianSystem& sys, const Field& field, Matrix& out, RhsWorkspace& ws) {
  const int n = sys.fiber_dim;
  const int np = field.grid.n_points;
  const double t = field.time;
  if (t >= 0.0) throw DomainError("rhs: field time must be negative");
  derivative_into(field.values, field.grid.spacing(), 4, ws.du);
  out.resize(n, np);
  Eigen::PartialPivLU<Matrix> lu(n);
  for (int j = 0; j < np; ++j) {
    ws.v = field.values.col(j);
    if (ws.v.norm() >= sys.ball_radius) {
      std::ostringstream os;
      os << "rhs: state left the admissible ball |v| < R at t=" << t
         << ", x=" << field.grid.x(j);
      throw DomainError(os.str());
    }
    const double x = field.grid.x(j);
    sys.b0(t, x, ws.v, ws.b0);
    sys.bc(t, x, ws.v, ws.bc);
    ws.rhs = (1.0 / t) * (ws.bc * (sys.proj.p * ws.v));
    if (sys.b1) {
      sys.b1(t, x, ws.v, ws.b1);
      ws.rhs.noalias() -= ws.b1 * ws.du.col(j);
    }
    if (sys.f) {
      sys.f(t, x, ws.v, ws.fv);
      ws.rhs += ws.fv;
    }
    lu.compute(ws.b0);
    if (std::abs(lu.determinant()) < 1e-300) {
      std::ostringstream os;
      os << "rhs: singular B0 at t=" << t << ", x=" << field.grid.x(j);
      throw DomainError(os.str());
    }
    out.col(j) = lu.solve(ws.rhs);
  }
}

}  // namespace

Field rhs(const FuchsianSystem& sys, const Field& field) {
  Field out = field;
  RhsWorkspace ws;
  rhs_into(sys, field, out.values, ws);
  return out;
}

Field step(const FuchsianSystem& sys, const Field& field, double dt, double eps_d) {
  if (dt <= 0.0) throw DomainError("step: dt must be positive");
  if (field.time + dt >= 0.0) throw DomainError("step: step would cross t = 0");
  RhsWorkspace ws;
  Matrix k1, k2, k3, k4;
  Field stage = field;

  rhs_into(sys, field, k1, ws);
  stage.time = field.time + 0.5 * dt;
  stage.values = field.values + (0.5 * dt) * k1;
  rhs_into(sys, stage, k2, ws);
  stage.values = field.values + (0.5 * dt) * k2;
  rhs_into(sys, stage, k3, ws);
  stage.time = field.time + dt;
  stage.values = field.values + dt * k3;
  rhs_into(sys, stage, k4, ws);

  Field out = field;
  out.time = field.time + dt;
  out.values = field.values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (eps_d > 0.0) {
    Matrix scratch;
    kreiss_oliger_inplace(out.values, eps_d, scratch);
  }
  return out;
}

double max_characteristic_speed(const FuchsianSystem& sys, const Field& field) {
  if (!sys.b1) return 0.0;
  const int n = sys.fiber_dim;
  const Matrix& h = sys.inner_product;
  Matrix b0(n, n), b1(n, n);
  double speed = 0.0;
  for (int j = 0; j < field.grid.n_points; ++j) {
    const Vector v = field.values.col(j);
    const double x = field.grid.x(j);
    sys.b0(field.time, x, v, b0);
    sys.b1(field.time, x, v, b1);
    Matrix s0 = h * b0, s1 = h * b1;
    s0 = 0.5 * (s0 + s0.transpose());
    s1 = 0.5 * (s1 + s1.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(s1, s0);
    speed = std::max(speed, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return speed;
}

namespace {

// <a, W b>_L2 with W = h * M(t,x,u) evaluated pointwise
double quad_form_b0(const FuchsianSystem& sys, const Field& f) {
  const int n = sys.fiber_dim;
  Matrix b0(n, n);
  double total = 0.0;
  for (int j = 0; j < f.grid.n_points; ++j) {
    const Vector v = f.values.col(j);
    sys.b0(f.time, f.grid.x(j), v, b0);
    total += v.dot(sys.inner_product * (b0 * v));
  }
  return total * f.grid.spacing();
}

double ftilde_hk_norm_sq(const FuchsianSystem& sys, const Field& like, int k) {
  if (!sys.split || !sys.split->ftilde) return 0.0;
  Field g = like;
  Vector w(sys.fiber_dim);
  for (int j = 0; j < like.grid.n_points; ++j) {
    sys.split->ftilde(like.time, like.grid.x(j), w);
    g.values.col(j) = w;
  }
  const double norm = sobolev_norm(g, k);
  return norm * norm;
}

}  // namespace

IdentityResidual energy_identity(const FuchsianSystem& sys, const Field& before,
                                 const Field& after, double dt) {
  const int n = sys.fiber_dim;
  const Matrix& h = sys.inner_product;
  Field mid = before;
  mid.time = 0.5 * (before.time + after.time);
  mid.values = 0.5 * (before.values + after.values);

  const double lhs = (quad_form_b0(sys, after) - quad_form_b0(sys, before)) / dt;

  Matrix du;
  derivative_into(mid.values, mid.grid.spacing(), 4, du);
  Matrix bc(n, n);
  Vector fv(n);
  double term_bc = 0.0, term_div = 0.0, term_f = 0.0;
  for (int j = 0; j < mid.grid.n_points; ++j) {
    const Vector v = mid.values.col(j);
    const double x = mid.grid.x(j);
    sys.bc(mid.time, x, v, bc);
    term_bc += v.dot(h * (bc * (sys.proj.p * v)));
    const Matrix divb = div_b(sys, mid.time, x, v, du.col(j)).value;
    term_div += v.dot(h * (divb * v));
    if (sys.f) {
      sys.f(mid.time, x, v, fv);
      term_f += v.dot(h * fv);
    }
  }
  const double hsp = mid.grid.spacing();
  term_bc *= hsp / mid.time;
  term_div *= 0.5 * hsp;
  term_f *= hsp;

  IdentityResidual r;
  r.absolute = std::abs(lhs - 2.0 * (term_bc + term_div + term_f));
  const double scale = std::max({std::abs(lhs), 2.0 * std::abs(term_bc),
                                 2.0 * std::abs(term_div), 2.0 * std::abs(term_f), 1e-300});
  r.relative = r.absolute / scale;
  return r;
}

double energy_identity_residual(const FuchsianSystem& sys, const Field& before,
                                const Field& after, double dt) {
  return energy_identity(sys, before, after, dt).absolute;
}

std::vector<double> RunRecord::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.t);
  return t;
}

std::vector<double> RunRecord::column_hk(int l) const {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.hk.at(l));
  return v;
}

RunRecord evolve(const FuchsianSystem& sys, const Field& initial, const StepSchedule& sched,
                 const MonitorConfig& mon) {
  RunRecord rec;
  rec.k = mon.k_reg;
  if (initial.time >= 0.0) throw DomainError("evolve: initial time must be negative");
  if (sched.t_floor >= 0.0) throw DomainError("evolve: t_floor must be negative");

  Field cur = initial;
  Field prev = cur;
  double prev_dt = 0.0;

  const Matrix pperp = sys.proj.complement();
  const int k = mon.k_reg;

  double pu_hk_prev = sobolev_norm_projected(cur, k, sys.proj.p);
  rec.ledger.ftilde_sup = ftilde_hk_norm_sq(sys, cur, k);

  auto record_sample = [&](double dt_used, bool with_identity) {
    RunSample s;
    s.t = cur.time;
    s.dt = dt_used;
    s.hk.resize(k + 1);
    for (int l = 0; l <= k; ++l) s.hk[l] = sobolev_norm(cur, l);
    s.p_l2 = sobolev_norm_projected(cur, 0, sys.proj.p);
    s.p_hkm1 = sobolev_norm_projected(cur, std::max(k - 1, 0), sys.proj.p);
    s.pperp_hkm1 = sobolev_norm_projected(cur, std::max(k - 1, 0), pperp);
    rec.ledger.hk_norm_sq = s.hk[k] * s.hk[k];
    rec.ledger.ftilde_sup = std::max(rec.ledger.ftilde_sup, ftilde_hk_norm_sq(sys, cur, k));
    s.energy_q = rec.ledger.q();
    if (with_identity && mon.identity_residual && dt_used > 0.0) {
      const auto res = energy_identity(sys, prev, cur, dt_used);
      s.identity_residual = res.relative;
      rec.ledger.identity_residual = res.relative;
    }
    rec.samples.push_back(std::move(s));
    if (mon.store_fields) rec.fields.push_back(cur);
  };

  record_sample(0.0, false);

  double next_record = std::abs(cur.time) * mon.record_factor;
  size_t forced_idx = 0;
  while (forced_idx < mon.forced_times.size() && mon.forced_times[forced_idx] <= cur.time)
    ++forced_idx;

  double lambda = max_characteristic_speed(sys, cur);
  int steps_since_refresh = 0;
  const double hsp = cur.grid.spacing();

  while (cur.time < sched.t_floor - 1e-15 * std::abs(sched.t_floor)) {
    if (steps_since_refresh >= sched.lambda_refresh) {
      lambda = max_characteristic_speed(sys, cur);
      steps_since_refresh = 0;
    }
    double dt = std::min(sched.singular_factor * std::abs(cur.time), sched.dt_max);
    if (lambda > 0.0) dt = std::min(dt, sched.cfl * hsp / lambda);
    bool forced_hit = false;
    if (forced_idx < mon.forced_times.size() &&
        cur.time + dt >= mon.forced_times[forced_idx] - 1e-15) {
      dt = mon.forced_times[forced_idx] - cur.time;
      forced_hit = true;
    }
    if (cur.time + dt > sched.t_floor) dt = sched.t_floor - cur.time;
    if (dt <= 0.0) break;

    prev = cur;
    prev_dt = dt;
    try {
      cur = step(sys, cur, dt, sched.dissipation);
    } catch (const DomainError& e) {
      cur = prev;
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }
    ++steps_since_refresh;

    if (!cur.finite()) {
      cur = prev;
      rec.aborted = true;
      rec.abort_reason = "non-finite state detected";
      break;
    }

    const double pu_hk = sobolev_norm_projected(cur, k, sys.proj.p);
    // -(1/tau) |P u|^2 >= 0 for tau < 0; trapezoid over the step
    rec.ledger.pu_integral += 0.5 * dt *
        (pu_hk_prev * pu_hk_prev / std::abs(prev.time) + pu_hk * pu_hk / std::abs(cur.time));
    pu_hk_prev = pu_hk;

    if (forced_hit) {
      record_sample(dt, true);
      ++forced_idx;
      next_record = std::min(next_record, std::abs(cur.time) * mon.record_factor);
      continue;
    }
    if (std::abs(cur.time) <= next_record ||
        cur.time >= sched.t_floor - 1e-15 * std::abs(sched.t_floor)) {
      record_sample(dt, true);
      next_record = std::abs(cur.time) * mon.record_factor;
    }
  }
  if (rec.aborted && !rec.samples.empty()) {
    // keep the last healthy state as the terminal record
    if (std::abs(rec.samples.back().t - cur.time) > 1e-15) record_sample(prev_dt, false);
  }
  rec.final_state = cur;
  return rec;
}

}  // namespace fuchsol
