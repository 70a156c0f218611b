#pragma once

#include "hdgpod/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace hdgpod {

/// Polynomial bases of degree k on the reference element and reference face.
///
/// Both bases are orthonormal in L2 of their reference simplex (built by
/// Cholesky orthonormalisation of monomials), so on an affine element K the
/// scalar mass matrix is |det J_K| times the identity. Tables of values and
/// gradients are cached at the default quadrature rules, which are exact to
/// degree 2k+1.
class ReferenceBasis {
 public:
  static constexpr int kMaxDegree = 6;

  ReferenceBasis(int dim, int k);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int degree() const { return k_; }
  [[nodiscard]] int num_scalar() const { return static_cast<int>(scalar_exponents_.size()); }
  [[nodiscard]] int num_face() const { return static_cast<int>(face_exponents_.size()); }

  [[nodiscard]] Eigen::VectorXd scalar_values(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// Reference gradients, one row per basis function.
  [[nodiscard]] Eigen::MatrixXd scalar_gradients(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  [[nodiscard]] Eigen::VectorXd face_values(const Eigen::Ref<const Eigen::VectorXd>& eta) const;

  [[nodiscard]] const QuadratureRule& element_quadrature() const { return element_rule_; }
  [[nodiscard]] const QuadratureRule& face_quadrature() const { return face_rule_; }
  /// num_scalar x nq values at element_quadrature().
  [[nodiscard]] const Eigen::MatrixXd& element_table() const { return element_table_; }
  /// Per quadrature point: num_scalar x dim reference gradients.
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& gradient_table() const { return gradient_table_; }
  /// num_face x nqf values at face_quadrature().
  [[nodiscard]] const Eigen::MatrixXd& face_table() const { return face_table_; }

 private:
  using Exponent = std::array<int, 3>;

  static std::vector<Exponent> exponents(int dim, int k);
  static Eigen::MatrixXd orthonormalizer(int dim, const std::vector<Exponent>& exps, int k);

  int dim_;
  int k_;
  std::vector<Exponent> scalar_exponents_;
  std::vector<Exponent> face_exponents_;
  Eigen::MatrixXd scalar_coeffs_;  // phi = C * monomials
  Eigen::MatrixXd face_coeffs_;
  QuadratureRule element_rule_;
  QuadratureRule face_rule_;
  Eigen::MatrixXd element_table_;
  std::vector<Eigen::MatrixXd> gradient_table_;
  Eigen::MatrixXd face_table_;
};

/// Binomial coefficient, used for the space dimensions C(k+d, d).
int binomial(int n, int k);

}  // namespace hdgpod
