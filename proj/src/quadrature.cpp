#include "hdgpod/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace hdgpod {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  // Golub-Welsch on the Legendre Jacobi matrix, mapped from [-1, 1] to [0, 1].
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    T(i, i - 1) = b;
    T(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
  QuadratureRule rule;
  rule.points.resize(1, n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points(0, i) = 0.5 * (eig.eigenvalues()(i) + 1.0);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights(i) = v0 * v0;  // 2 v0^2 on [-1,1], halved by the map
  }
  return rule;
}

QuadratureRule simplex_quadrature(int dim, int degree) {
  if (degree < 0) degree = 0;
  QuadratureRule rule;
  if (dim == 1) {
    return gauss_legendre(degree / 2 + 1);
  }
  // The collapse adds (dim - 1) to the polynomial degree in the first direction.
  const int n = (degree + dim) / 2 + 1;
  const QuadratureRule g = gauss_legendre(n);
  if (dim == 2) {
    rule.points.resize(2, n * n);
    rule.weights.resize(n * n);
    int q = 0;
    for (int i = 0; i < n; ++i) {
      const double u = g.points(0, i);
      for (int j = 0; j < n; ++j, ++q) {
        const double v = g.points(0, j);
        rule.points(0, q) = u;
        rule.points(1, q) = v * (1.0 - u);
        rule.weights(q) = g.weights(i) * g.weights(j) * (1.0 - u);
      }
    }
    return rule;
  }
  if (dim == 3) {
    rule.points.resize(3, n * n * n);
    rule.weights.resize(n * n * n);
    int q = 0;
    for (int i = 0; i < n; ++i) {
      const double u = g.points(0, i);
      for (int j = 0; j < n; ++j) {
        const double v = g.points(0, j);
        for (int k = 0; k < n; ++k, ++q) {
          const double w = g.points(0, k);
          rule.points(0, q) = u;
          rule.points(1, q) = v * (1.0 - u);
          rule.points(2, q) = w * (1.0 - u) * (1.0 - v);
          rule.weights(q) =
              g.weights(i) * g.weights(j) * g.weights(k) * (1.0 - u) * (1.0 - u) * (1.0 - v);
        }
      }
    }
    return rule;
  }
  throw std::invalid_argument("simplex_quadrature: dim must be 1, 2 or 3");
}

}  // namespace hdgpod
