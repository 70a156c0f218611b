#pragma once

#include <Eigen/Dense>

#include <vector>

namespace hdgpod {

/// Points (one per column) and weights on a reference simplex.
struct QuadratureRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;

  [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre rule with n points on [0, 1].
QuadratureRule gauss_legendre(int n);

/// Collapsed-coordinate (Duffy) product rule on the reference simplex
/// {x_i >= 0, sum x_i <= 1} of dimension 1, 2 or 3, exact for polynomials of
/// total degree <= `degree`.
QuadratureRule simplex_quadrature(int dim, int degree);

}  // namespace hdgpod
