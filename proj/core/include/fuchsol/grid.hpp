#ifndef FUCHSOL_GRID_HPP
#define FUCHSOL_GRID_HPP

#include "fuchsol/types.hpp"

namespace fuchsol {

// Uniform periodic grid on [x_min, x_min + length).
struct PeriodicGrid {
  int n_points = 0;
  double length = 0.0;
  double x_min = 0.0;

  PeriodicGrid() = default;
  PeriodicGrid(int n, double len, double x0 = 0.0) : n_points(n), length(len), x_min(x0) {
    if (n < 8) throw ShapeError("PeriodicGrid needs at least 8 points");
    if (len <= 0.0) throw ShapeError("PeriodicGrid length must be positive");
  }
  double spacing() const { return length / n_points; }
  double x(int j) const { return x_min + spacing() * j; }
  int wrap(int j) const {
    j %= n_points;
    return j < 0 ? j + n_points : j;
  }
};

// Discrete state u(t, x_j) with fiber dimension N: values is N x n_points.
struct Field {
  PeriodicGrid grid;
  int fiber_dim = 0;
  double time = -1.0;
  Matrix values;

  Field() = default;
  Field(PeriodicGrid g, int n, double t)
      : grid(g), fiber_dim(n), time(t), values(Matrix::Zero(n, g.n_points)) {}

  bool finite() const { return values.allFinite(); }
  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

}  // namespace fuchsol

#endif
