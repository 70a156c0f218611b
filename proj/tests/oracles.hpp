#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "hdgpod/assembly.hpp"
#include "hdgpod/fom.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using hdgpod::HdgState;
using hdgpod::HdgSystem;
using hdgpod::SparseMatrix;

inline void append_block(std::vector<Eigen::Triplet<double>>& t, const SparseMatrix& A, int r0,
                         int c0, double s) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
}

/// Uncondensed backward Euler matrix
/// [A1 -A2 A3; A2^T A4+M/dt -A5; A3^T A5^T -A6].
inline SparseMatrix saddle_matrix(const HdgSystem& sys, double dt) {
  const int n1 = sys.layout().n1(), n2 = sys.layout().n2(), n3 = sys.layout().n3();
  std::vector<Eigen::Triplet<double>> t;
  append_block(t, sys.A1.to_sparse(), 0, 0, 1.0);
  append_block(t, sys.A2, 0, n1, -1.0);
  append_block(t, sys.A3, 0, n1 + n2, 1.0);
  append_block(t, SparseMatrix(sys.A2.transpose()), n1, 0, 1.0);
  append_block(t, sys.A4.to_sparse(), n1, n1, 1.0);
  append_block(t, sys.M.to_sparse(), n1, n1, 1.0 / dt);
  append_block(t, sys.A5, n1, n1 + n2, -1.0);
  append_block(t, SparseMatrix(sys.A3.transpose()), n1 + n2, 0, 1.0);
  append_block(t, SparseMatrix(sys.A5.transpose()), n1 + n2, n1, 1.0);
  append_block(t, sys.A6.to_sparse(), n1 + n2, n1 + n2, -1.0);
  SparseMatrix K(n1 + n2 + n3, n1 + n2 + n3);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

/// Backward Euler steps solved on the full saddle system with SparseLU.
inline std::vector<HdgState> saddle_steps(const HdgSystem& sys, double dt, int steps,
                                          const Eigen::VectorXd& beta0,
                                          const hdgpod::LoadFunction& load = {}) {
  const int n1 = sys.layout().n1(), n2 = sys.layout().n2(), n3 = sys.layout().n3();
  SparseMatrix K = saddle_matrix(sys, dt);
  K.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(K);
  std::vector<HdgState> out;
  Eigen::VectorXd beta = beta0;
  for (int n = 1; n <= steps; ++n) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n1 + n2 + n3);
    rhs.segment(n1, n2) = sys.M.apply(beta) / dt;
    if (load) rhs.segment(n1, n2) += load(n * dt);
    const Eigen::VectorXd x = lu.solve(rhs);
    HdgState s{x.head(n1), x.segment(n1, n2), x.tail(n3)};
    beta = s.beta;
    out.push_back(std::move(s));
  }
  return out;
}

/// Symmetric square root of an SPD matrix.
inline Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& W) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (W + W.transpose()));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Singular values and W-orthonormal left vectors of W^{1/2} Y diag(sqrt(w)) by dense SVD.
struct DensePod {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd modes;
};

inline DensePod dense_pod(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& W,
                          const Eigen::VectorXd& w) {
  const Eigen::MatrixXd S = spd_sqrt(W);
  const Eigen::MatrixXd Z = S * Y * w.cwiseSqrt().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU);
  DensePod p;
  p.sigma = svd.singularValues();
  p.modes = S.ldlt().solve(svd.matrixU());
  return p;
}

/// Exact integral of x^a y^b z^c over the unit reference simplex of dimension d.
inline double simplex_monomial(int d, int a, int b, int c) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  if (d == 1) return 1.0 / (a + 1);
  if (d == 2) return fact(a) * fact(b) / fact(a + b + 2);
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
}

/// Broken L2 error between a scalar coefficient vector and a smooth function,
/// evaluated with a fresh high-degree rule on every element.
inline double l2_error(const hdgpod::Discretization& disc, const Eigen::VectorXd& beta,
                       const std::function<double(const hdgpod::Point&)>& u, int degree = 12) {
  const auto rule = hdgpod::simplex_quadrature(disc.mesh.dim(), degree);
  const int ns = disc.basis.num_scalar();
  const int d = disc.mesh.dim();
  double err2 = 0.0;
  for (int e = 0; e < disc.mesh.num_elements(); ++e) {
    const Eigen::MatrixXd J = disc.mesh.jacobian(e);
    const double detJ = std::abs(J.determinant());
    const hdgpod::Point& x0 = disc.mesh.vertices()[disc.mesh.element(e)[0]];
    for (int q = 0; q < rule.size(); ++q) {
      hdgpod::Point x = x0;
      x.head(d) += J * rule.points.col(q);
      const double uh = disc.basis.scalar_values(rule.points.col(q))
                            .dot(beta.segment(static_cast<long>(e) * ns, ns));
      const double diff = uh - u(x);
      err2 += rule.weights[q] * detJ * diff * diff;
    }
  }
  return std::sqrt(err2);
}

}  // namespace oracle
