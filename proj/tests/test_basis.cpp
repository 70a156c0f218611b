#include "doctest.h"
#include "oracles.hpp"

#include "hdgpod/basis.hpp"
#include "hdgpod/quadrature.hpp"

#include <cmath>

using namespace hdgpod;

TEST_CASE("Gauss-Legendre integrates polynomials on [0, 1]") {
  for (int n = 1; n <= 8; ++n) {
    const QuadratureRule g = gauss_legendre(n);
    CHECK(g.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int q = 0; q < g.size(); ++q) s += g.weights[q] * std::pow(g.points(0, q), p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("simplex rules are exact to their degree") {
  for (int dim : {1, 2, 3}) {
    for (int deg = 0; deg <= 12; ++deg) {
      const QuadratureRule r = simplex_quadrature(dim, deg);
      CHECK(r.points.rows() == dim);
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; b <= (dim > 1 ? deg - a : 0); ++b)
          for (int c = 0; c <= (dim > 2 ? deg - a - b : 0); ++c) {
            double s = 0.0;
            for (int q = 0; q < r.size(); ++q) {
              double v = std::pow(r.points(0, q), a);
              if (dim > 1) v *= std::pow(r.points(1, q), b);
              if (dim > 2) v *= std::pow(r.points(2, q), c);
              s += r.weights[q] * v;
            }
            CHECK(s == doctest::Approx(oracle::simplex_monomial(dim, a, b, c)).epsilon(1e-12));
          }
    }
  }
}

TEST_CASE("space dimensions") {
  CHECK(binomial(3, 2) == 3);
  for (int k = 0; k <= 4; ++k) {
    CHECK(ReferenceBasis(2, k).num_scalar() == (k + 1) * (k + 2) / 2);
    CHECK(ReferenceBasis(2, k).num_face() == k + 1);
    CHECK(ReferenceBasis(3, k).num_scalar() == (k + 1) * (k + 2) * (k + 3) / 6);
    CHECK(ReferenceBasis(3, k).num_face() == (k + 1) * (k + 2) / 2);
  }
}

TEST_CASE("bases are orthonormal on the reference element and face") {
  for (int dim : {2, 3}) {
    for (int k = 0; k <= 4; ++k) {
      const ReferenceBasis b(dim, k);
      const QuadratureRule r = simplex_quadrature(dim, 2 * k + 2);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(b.num_scalar(), b.num_scalar());
      for (int q = 0; q < r.size(); ++q) {
        const Eigen::VectorXd v = b.scalar_values(r.points.col(q));
        G += r.weights[q] * v * v.transpose();
      }
      CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-9);

      const QuadratureRule rf = simplex_quadrature(dim - 1, 2 * k + 2);
      Eigen::MatrixXd F = Eigen::MatrixXd::Zero(b.num_face(), b.num_face());
      for (int q = 0; q < rf.size(); ++q) {
        const Eigen::VectorXd v = b.face_values(rf.points.col(q));
        F += rf.weights[q] * v * v.transpose();
      }
      CHECK((F - Eigen::MatrixXd::Identity(F.rows(), F.cols())).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("the first basis function is constant") {
  const ReferenceBasis b2(2, 3), b3(3, 2);
  CHECK(b2.scalar_values(Eigen::Vector2d(0.1, 0.3))[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(b3.scalar_values(Eigen::Vector3d(0.1, 0.3, 0.2))[0] == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("gradients match finite differences") {
  const ReferenceBasis b(3, 3);
  const Eigen::Vector3d x(0.2, 0.15, 0.3);
  const Eigen::MatrixXd G = b.scalar_gradients(x);
  const double h = 1e-6;
  for (int a = 0; a < 3; ++a) {
    Eigen::Vector3d xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    const Eigen::VectorXd fd = (b.scalar_values(xp) - b.scalar_values(xm)) / (2 * h);
    CHECK((fd - G.col(a)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("cached tables agree with direct evaluation") {
  const ReferenceBasis b(2, 2);
  const QuadratureRule& r = b.element_quadrature();
  for (int q = 0; q < r.size(); ++q) {
    CHECK((b.element_table().col(q) - b.scalar_values(r.points.col(q))).norm() < 1e-14);
    CHECK((b.gradient_table()[q] - b.scalar_gradients(r.points.col(q))).norm() < 1e-13);
  }
}

TEST_CASE("unsupported degrees and dimensions throw") {
  CHECK_THROWS(ReferenceBasis(2, -1));
  CHECK_THROWS(ReferenceBasis(2, ReferenceBasis::kMaxDegree + 1));
  CHECK_THROWS(ReferenceBasis(4, 1));
  CHECK_THROWS(simplex_quadrature(4, 2));
}
