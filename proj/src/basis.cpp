#include "hdgpod/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdgpod {

namespace {

double monomial(const std::array<int, 3>& e, const Eigen::Ref<const Eigen::VectorXd>& x) {
  double v = 1.0;
  for (int c = 0; c < x.size(); ++c)
    if (e[c] > 0) v *= std::pow(x[c], e[c]);
  return v;
}

}  // namespace

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

std::vector<ReferenceBasis::Exponent> ReferenceBasis::exponents(int dim, int k) {
  std::vector<Exponent> out;
  for (int total = 0; total <= k; ++total) {
    if (dim == 0) {
      if (total == 0) out.push_back({0, 0, 0});
    } else if (dim == 1) {
      out.push_back({total, 0, 0});
    } else if (dim == 2) {
      for (int a = total; a >= 0; --a) out.push_back({a, total - a, 0});
    } else {
      for (int a = total; a >= 0; --a)
        for (int b = total - a; b >= 0; --b) out.push_back({a, b, total - a - b});
    }
  }
  return out;
}

Eigen::MatrixXd ReferenceBasis::orthonormalizer(int dim, const std::vector<Exponent>& exps,
                                                int k) {
  const int n = static_cast<int>(exps.size());
  if (dim == 0) {
    return Eigen::MatrixXd::Ones(1, 1);
  }
  const QuadratureRule rule = simplex_quadrature(dim, 2 * k);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd m(n);
  for (int q = 0; q < rule.size(); ++q) {
    for (int i = 0; i < n; ++i) m[i] = monomial(exps[i], rule.points.col(q));
    gram.noalias() += rule.weights[q] * m * m.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("monomial Gram matrix is not positive definite");
  // phi = L^{-1} m gives int phi phi^T = I.
  const Eigen::MatrixXd L = llt.matrixL();
  return L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
}

ReferenceBasis::ReferenceBasis(int dim, int k) : dim_(dim), k_(k) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("basis dimension must be 2 or 3");
  if (k < 0) throw std::invalid_argument("polynomial degree must be >= 0");
  if (k > kMaxDegree)
    throw std::invalid_argument("polynomial degree " + std::to_string(k) +
                                " exceeds the supported maximum of " +
                                std::to_string(kMaxDegree));
  scalar_exponents_ = exponents(dim, k);
  face_exponents_ = exponents(dim - 1, k);
  scalar_coeffs_ = orthonormalizer(dim, scalar_exponents_, k);
  face_coeffs_ = orthonormalizer(dim - 1, face_exponents_, k);

  element_rule_ = simplex_quadrature(dim, 2 * k + 1);
  face_rule_ = simplex_quadrature(dim - 1, 2 * k + 1);

  element_table_.resize(num_scalar(), element_rule_.size());
  gradient_table_.reserve(element_rule_.size());
  for (int q = 0; q < element_rule_.size(); ++q) {
    element_table_.col(q) = scalar_values(element_rule_.points.col(q));
    gradient_table_.push_back(scalar_gradients(element_rule_.points.col(q)));
  }
  face_table_.resize(num_face(), face_rule_.size());
  for (int q = 0; q < face_rule_.size(); ++q)
    face_table_.col(q) = face_values(face_rule_.points.col(q));
}

Eigen::VectorXd ReferenceBasis::scalar_values(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  Eigen::VectorXd m(num_scalar());
  for (int i = 0; i < num_scalar(); ++i) m[i] = monomial(scalar_exponents_[i], xi);
  return scalar_coeffs_ * m;
}

Eigen::MatrixXd ReferenceBasis::scalar_gradients(
    const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(num_scalar(), dim_);
  for (int i = 0; i < num_scalar(); ++i) {
    for (int c = 0; c < dim_; ++c) {
      Exponent e = scalar_exponents_[i];
      if (e[c] == 0) continue;
      const double factor = e[c];
      --e[c];
      dm(i, c) = factor * monomial(e, xi);
    }
  }
  return scalar_coeffs_ * dm;
}

Eigen::VectorXd ReferenceBasis::face_values(const Eigen::Ref<const Eigen::VectorXd>& eta) const {
  Eigen::VectorXd m(num_face());
  for (int i = 0; i < num_face(); ++i) m[i] = monomial(face_exponents_[i], eta);
  return face_coeffs_ * m;
}

}  // namespace hdgpod
