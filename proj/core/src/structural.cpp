#include "fuchsol/structural.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "fuchsol/div_b.hpp"

namespace fuchsol {

namespace {

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

// min eigenvalue of the pencil (A, B) with B SPD, both symmetric
double min_gen_eig(const Matrix& a, const Matrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b);
  return es.eigenvalues().minCoeff();
}
double max_gen_eig(const Matrix& a, const Matrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b);
  return es.eigenvalues().maxCoeff();
}

Matrix h_sym(const Matrix& h, const Matrix& a) {
  Matrix ha = h * a;
  return 0.5 * (ha + ha.transpose());
}

}  // namespace

SampleSet SampleSet::draw(const FuchsianSystem& sys, int count, std::uint64_t seed) {
  SampleSet s;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double lo = std::log(std::abs(sys.t_min));
  const double hi = std::log(std::abs(sys.t_max));
  const int n = sys.fiber_dim;
  s.t.reserve(count);
  for (int i = 0; i < count; ++i) {
    s.t.push_back(-std::exp(hi + (lo - hi) * uni(rng)));
    s.x.push_back(sys.x_min + sys.x_period * uni(rng));
    // (v, w) jointly in the ball of radius 0.9 R
    Vector z(2 * n);
    for (int j = 0; j < 2 * n; ++j) z(j) = gauss(rng);
    const double radius = 0.9 * sys.ball_radius * std::pow(uni(rng), 1.0 / (2 * n));
    z *= radius / std::max(z.norm(), 1e-300);
    s.v.push_back(z.head(n));
    s.w.push_back(z.tail(n));
  }
  return s;
}

BoundsReport check_pointwise_bounds(const FuchsianSystem& sys, const SampleSet& samples) {
  BoundsReport rep;
  const int n = sys.fiber_dim;
  const Matrix& h = sys.inner_product;
  Matrix b0(n, n), bc(n, n);
  const Matrix basis = sys.proj.range_basis();
  const bool have_range = basis.cols() > 0;
  const Matrix hr = have_range ? Matrix(basis.transpose() * h * basis) : Matrix();

  double min_b0 = std::numeric_limits<double>::infinity();
  double kappa = std::numeric_limits<double>::infinity();
  double max_bc = 0.0;
  double kappa_t = std::numeric_limits<double>::infinity();
  double min_b0_r = std::numeric_limits<double>::infinity();

  for (size_t i = 0; i < samples.t.size(); ++i) {
    sys.b0(samples.t[i], samples.x[i], samples.v[i], b0);
    sys.bc(samples.t[i], samples.x[i], samples.v[i], bc);
    const Matrix s0 = h_sym(h, b0);
    const Matrix sc = h_sym(h, bc);
    const double lam0 = min_gen_eig(s0, h);
    if (lam0 <= 0.0) {
      rep.violations.push_back({static_cast<int>(i), "B0 not positive definite", lam0});
      continue;
    }
    min_b0 = std::min(min_b0, lam0);
    kappa = std::min(kappa, min_gen_eig(sc, s0));
    max_bc = std::max(max_bc, max_gen_eig(sc, h));
    if (have_range) {
      const Matrix s0r = basis.transpose() * s0 * basis;
      const Matrix scr = basis.transpose() * sc * basis;
      kappa_t = std::min(kappa_t, min_gen_eig(scr, s0r));
      min_b0_r = std::min(min_b0_r, min_gen_eig(s0r, hr));
    }
  }
  rep.gamma1 = 1.0 / min_b0;
  rep.kappa = kappa;
  rep.gamma2 = max_bc / kappa;
  if (have_range) {
    rep.kappa_tilde = kappa_t;
    rep.gamma1_tilde = std::min(1.0 / min_b0_r, rep.gamma1);
  } else {
    rep.kappa_tilde = kappa;
    rep.gamma1_tilde = rep.gamma1;
  }
  return rep;
}

bool ResidualReport::pass(double tol) const {
  return b0_symmetry <= tol && b1_symmetry <= tol && bc_commutator <= tol &&
         b0_posdef_margin > 0.0 && violations.empty();
}

ResidualReport check_residuals(const FuchsianSystem& sys, const SampleSet& samples) {
  ResidualReport rep;
  const int n = sys.fiber_dim;
  const Matrix& h = sys.inner_product;
  Matrix b0(n, n), b1(n, n), bc(n, n);
  rep.b0_posdef_margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < samples.t.size(); ++i) {
    const double t = samples.t[i], x = samples.x[i];
    const Vector& v = samples.v[i];
    sys.b0(t, x, v, b0);
    sys.bc(t, x, v, bc);
    Matrix hb = h * b0;
    rep.b0_symmetry = std::max(rep.b0_symmetry, (hb - hb.transpose()).cwiseAbs().maxCoeff());
    if (sys.b1) {
      sys.b1(t, x, v, b1);
      hb = h * b1;
      rep.b1_symmetry = std::max(rep.b1_symmetry, (hb - hb.transpose()).cwiseAbs().maxCoeff());
    }
    rep.bc_commutator = std::max(
        rep.bc_commutator, (sys.proj.p * bc - bc * sys.proj.p).cwiseAbs().maxCoeff());
    const double margin = min_gen_eig(h_sym(h, b0), h);
    rep.b0_posdef_margin = std::min(rep.b0_posdef_margin, margin);
    if (margin <= 0.0)
      rep.violations.push_back({static_cast<int>(i), "B0 not positive definite", margin});
  }
  return rep;
}

GateResult kappa_gate(const StructuralConstants& c, int k) {
  GateResult g;
  const double odd = c.beta[1] + c.beta[3] + c.beta[5] + c.beta[7] + 2.0 * c.lambda3;
  const double grad = c.beta[1] + 2.0 * k * (k + 1) * c.b_const;
  g.lhs = c.kappa;
  g.rhs = 0.5 * c.gamma1 * std::max(odd, grad);
  g.pass = g.lhs > g.rhs;
  return g;
}

double zeta(const StructuralConstants& c, int k) {
  return c.kappa_tilde - 0.5 * c.gamma1_tilde * (c.beta[1] + (k - 1.0) * k * c.b_tilde);
}

namespace {

// Attribute sampled block norms to the basis (|t|^{p-1}, |t|^{p/2-1}, |t|^{-1}),
// most singular term first, using the most singular samples for it.
struct EnvelopeFit {
  double theta = 0, mid = 0, sing = 0;
};

EnvelopeFit fit_envelope(const std::vector<double>& abst, const std::vector<double>& val,
                         const std::vector<double>& w_mid, const std::vector<double>& w_sing,
                         double p) {
  EnvelopeFit fit;
  if (abst.empty()) return fit;
  std::vector<double> sorted = abst;
  std::sort(sorted.begin(), sorted.end());
  const double q20 = sorted[sorted.size() / 5];
  const double q50 = sorted[sorted.size() / 2];
  const double weight_floor = 0.05;

  auto g0 = [&](double a) { return std::pow(a, p - 1.0); };
  auto g1 = [&](double a) { return std::pow(a, 0.5 * p - 1.0); };

  for (size_t i = 0; i < abst.size(); ++i) {
    if (abst[i] > q20 || w_sing[i] < weight_floor) continue;
    fit.sing = std::max(fit.sing, val[i] * abst[i] / w_sing[i]);
  }
  for (size_t i = 0; i < abst.size(); ++i) {
    if (abst[i] > q50 || w_mid[i] < weight_floor) continue;
    const double rem = std::max(0.0, val[i] - fit.sing * w_sing[i] / abst[i]);
    fit.mid = std::max(fit.mid, rem / (g1(abst[i]) * w_mid[i]));
  }
  for (size_t i = 0; i < abst.size(); ++i) {
    double rem = val[i] - fit.sing * w_sing[i] / abst[i];
    if (w_mid[i] >= weight_floor) rem -= fit.mid * g1(abst[i]) * w_mid[i];
    fit.theta = std::max(fit.theta, std::max(0.0, rem) / g0(abst[i]));
  }
  return fit;
}

// b and b~ of the theorem: sup over (t,x) of sandwiched gradient operator norms.
void gradient_bounds(const FuchsianSystem& sys, double& b_const, double& b_tilde) {
  b_const = b_tilde = 0.0;
  if (!sys.split || !sys.split->b1_parts[2]) return;
  const int n = sys.fiber_dim;
  const Matrix& pmat = sys.proj.p;
  const Vector v0 = Vector::Zero(n);
  Matrix b0(n, n), bc(n, n), b2(n, n);
  Matrix b0p(n, n), bcp(n, n), b2p(n, n), b0m(n, n), bcm(n, n), b2m(n, n);

  const int nt = 24, nx = 48;
  const double lo = std::log(std::abs(sys.t_min)), hi = std::log(std::abs(sys.t_max));
  for (int it = 0; it < nt; ++it) {
    const double t = -std::exp(hi + (lo - hi) * it / (nt - 1.0));
    for (int ix = 0; ix < nx; ++ix) {
      const double x = sys.x_min + sys.x_period * ix / nx;
      const double hx = 1e-5 * std::max(1.0, std::abs(x));
      sys.b0(t, x, v0, b0);
      sys.bc(t, x, v0, bc);
      sys.split->b1_parts[2](t, x, v0, b2);
      sys.b0(t, x + hx, v0, b0p);
      sys.bc(t, x + hx, v0, bcp);
      sys.split->b1_parts[2](t, x + hx, v0, b2p);
      sys.b0(t, x - hx, v0, b0m);
      sys.bc(t, x - hx, v0, bcm);
      sys.split->b1_parts[2](t, x - hx, v0, b2m);

      const Matrix bci = bc.inverse();
      const Matrix b0i = b0.inverse();
      const Matrix grad_cb0 = (bcp.inverse() * b0p - bcm.inverse() * b0m) / (2.0 * hx);
      const Matrix grad_cb2 = (bcp.inverse() * b2p - bcm.inverse() * b2m) / (2.0 * hx);
      const Matrix grad_cpb0p =
          (bcp.inverse() * pmat * b0p * pmat - bcm.inverse() * pmat * b0m * pmat) / (2.0 * hx);

      const double second = op_norm(pmat * bc * grad_cb2 * pmat);
      b_const = std::max(b_const, op_norm(pmat * bc * grad_cb0 * b0i * pmat * b2 * pmat) + second);
      b_tilde = std::max(b_tilde, op_norm(pmat * bc * grad_cpb0p * pmat * b0i * b2 * pmat) + second);
    }
  }
}

}  // namespace

StructuralConstants estimate_constants(const FuchsianSystem& sys, const SampleSet& samples,
                                       int k_reg, double sigma_loss) {
  StructuralConstants c;
  c.k_reg = k_reg;
  c.sigma_loss = sigma_loss;
  c.p_exponent = sys.split ? sys.split->p_exponent : 1.0;

  const BoundsReport bounds = check_pointwise_bounds(sys, samples);
  if (!bounds.violations.empty())
    throw StructuralFailure("B0 not positive definite at sample " +
                            std::to_string(bounds.violations.front().index));
  c.kappa = bounds.kappa;
  c.gamma1 = bounds.gamma1;
  c.gamma2 = bounds.gamma2;
  c.kappa_tilde = bounds.kappa_tilde;
  c.gamma1_tilde = bounds.gamma1_tilde;

  const int n = sys.fiber_dim;
  const Matrix& pmat = sys.proj.p;
  const Matrix pperp = sys.proj.complement();
  const double R = sys.ball_radius;

  if (sys.split) {
    Vector fv(n);
    Matrix bm(n, n);
    for (size_t i = 0; i < samples.t.size(); ++i) {
      const double t = samples.t[i], x = samples.x[i];
      const Vector& v = samples.v[i];
      const double vn = v.norm(), pvn = (pmat * v).norm();
      if (sys.split->f_parts[1]) {
        sys.split->f_parts[1](t, x, v, fv);
        if (vn > 1e-6 * R) c.lambda1 = std::max(c.lambda1, (pmat * fv).norm() / vn);
        if (pvn > 1e-3 * R) c.lambda2 = std::max(c.lambda2, (pperp * fv).norm() / pvn);
      }
      if (sys.split->f_parts[2]) {
        sys.split->f_parts[2](t, x, v, fv);
        if (pvn > 1e-3 * R)
          c.lambda3 = std::max(c.lambda3, R * (pperp * fv).norm() / (pvn * pvn));
      }
      if (sys.split->b1_parts[1]) {
        sys.split->b1_parts[1](t, x, v, bm);
        c.alpha = std::max(c.alpha,
                           std::max(op_norm(pmat * bm * pperp), op_norm(pperp * bm * pmat)));
      }
    }
  }

  // Div B block norms over the samples
  const size_t m = samples.t.size();
  std::vector<double> abst(m), vpp(m), vpq(m), vqp(m), vqq(m), w1(m), wconst(m, 1.0);
  for (size_t i = 0; i < m; ++i) {
    abst[i] = std::abs(samples.t[i]);
    const Matrix d = div_b(sys, samples.t[i], samples.x[i], samples.v[i], samples.w[i]).value;
    vpp[i] = op_norm(pmat * d * pmat);
    vpq[i] = op_norm(pmat * d * pperp);
    vqp[i] = op_norm(pperp * d * pmat);
    vqq[i] = op_norm(pperp * d * pperp);
    w1[i] = (pmat * samples.v[i]).norm() / R;
  }
  std::vector<double> w1sq(m);
  for (size_t i = 0; i < m; ++i) w1sq[i] = w1[i] * w1[i];

  const double p = c.p_exponent;
  const EnvelopeFit pp = fit_envelope(abst, vpp, wconst, wconst, p);
  const EnvelopeFit pq = fit_envelope(abst, vpq, wconst, w1, p);
  const EnvelopeFit qp = fit_envelope(abst, vqp, wconst, w1, p);
  const EnvelopeFit qq = fit_envelope(abst, vqq, w1, w1sq, p);
  c.beta[0] = pp.mid;
  c.beta[1] = pp.sing;
  c.beta[2] = pq.mid;
  c.beta[3] = pq.sing;
  c.beta[4] = qp.mid;
  c.beta[5] = qp.sing;
  c.beta[6] = qq.mid;
  c.beta[7] = qq.sing;
  c.theta = std::max(std::max(pp.theta, pq.theta), std::max(qp.theta, qq.theta));

  gradient_bounds(sys, c.b_const, c.b_tilde);
  return c;
}

}  // namespace fuchsol
