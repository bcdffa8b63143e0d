#include "fuchsol/stencil.hpp"

namespace fuchsol {

void derivative_into(const Matrix& u, double h, int order, Matrix& out) {
  const int n = static_cast<int>(u.cols());
  out.resize(u.rows(), n);
  auto idx = [n](int j) { return ((j % n) + n) % n; };
  switch (order) {
    case 2:
      for (int j = 0; j < n; ++j)
        out.col(j) = (u.col(idx(j + 1)) - u.col(idx(j - 1))) / (2.0 * h);
      break;
    case 4:
      for (int j = 0; j < n; ++j)
        out.col(j) = (-u.col(idx(j + 2)) + 8.0 * u.col(idx(j + 1)) - 8.0 * u.col(idx(j - 1)) +
                      u.col(idx(j - 2))) /
                     (12.0 * h);
      break;
    case 6:
      for (int j = 0; j < n; ++j)
        out.col(j) = (u.col(idx(j + 3)) - 9.0 * u.col(idx(j + 2)) + 45.0 * u.col(idx(j + 1)) -
                      45.0 * u.col(idx(j - 1)) + 9.0 * u.col(idx(j - 2)) - u.col(idx(j - 3))) /
                     (60.0 * h);
      break;
    default:
      throw ShapeError("derivative: unsupported stencil order");
  }
}

Field derivative(const Field& f, int order) {
  if (f.grid.n_points <= order + 1) throw ShapeError("derivative: grid too small for stencil");
  Field out = f;
  derivative_into(f.values, f.grid.spacing(), order, out.values);
  return out;
}

void kreiss_oliger_inplace(Matrix& u, double eps_d, Matrix& scratch) {
  if (eps_d == 0.0) return;
  const int n = static_cast<int>(u.cols());
  scratch.resize(u.rows(), n);
  auto idx = [n](int j) { return ((j % n) + n) % n; };
  for (int j = 0; j < n; ++j)
    scratch.col(j) = u.col(idx(j - 3)) - 6.0 * u.col(idx(j - 2)) + 15.0 * u.col(idx(j - 1)) -
                     20.0 * u.col(j) + 15.0 * u.col(idx(j + 1)) - 6.0 * u.col(idx(j + 2)) +
                     u.col(idx(j + 3));
  u += (eps_d / 64.0) * scratch;
}

Field kreiss_oliger(const Field& f, double eps_d) {
  Field out = f;
  Matrix scratch;
  kreiss_oliger_inplace(out.values, eps_d, scratch);
  return out;
}

namespace {

double level_sum(const Matrix& u, const Matrix& w) {
  // sum_j u_j . (w u_j)
  if (w.size() == 0) return u.squaredNorm();
  return (u.array() * (w * u).array()).sum();
}

}  // namespace

double sobolev_norm(const Field& f, int k, const Matrix& w) {
  if (k < 0) throw ShapeError("sobolev_norm: k must be nonnegative");
  const double h = f.grid.spacing();
  double total = level_sum(f.values, w);
  Matrix cur = f.values, next;
  for (int l = 1; l <= k; ++l) {
    derivative_into(cur, h, 4, next);
    cur.swap(next);
    total += level_sum(cur, w);
  }
  return std::sqrt(h * total);
}

double sobolev_norm(const Field& f, int k) { return sobolev_norm(f, k, Matrix()); }

double sobolev_norm_projected(const Field& f, int k, const Matrix& projector) {
  Field pf = f;
  pf.values = projector * f.values;
  return sobolev_norm(pf, k);
}

double l2_inner(const Field& a, const Field& b, const Matrix& w) {
  const double h = a.grid.spacing();
  if (w.size() == 0) return h * (a.values.array() * b.values.array()).sum();
  return h * (a.values.array() * (w * b.values).array()).sum();
}

}  // namespace fuchsol
