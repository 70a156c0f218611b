#pragma once

#include "hdgpod/block_diagonal.hpp"

#include <Eigen/Dense>

#include <string>

namespace hdgpod {

enum class PodMethod {
  /// Eigendecomposition of the N x N weighted temporal Gram matrix. Resolves
  /// sigma only down to about sqrt(N eps) sigma_1, which also bounds its rank.
  Snapshots,
  /// QR + SVD of L^T Y diag(sqrt(w)) with W = L L^T blockwise.
  WeightedSvd,
};

struct PodOptions {
  PodMethod method = PodMethod::WeightedSvd;
  /// Modes with sigma_i <= rank_tolerance * sigma_1 are discarded.
  double rank_tolerance = 1e-12;
  /// Upper bound on the number of stored mode vectors (-1: all of rank).
  int max_modes = -1;
};

/// Weighted POD of one snapshot matrix.
///
/// Mode i is the coefficient vector of the i-th POD mode in the full-order
/// basis (a column of D), orthonormal in the inner product x^T W y.
struct PodBasis {
  std::string variable;
  Eigen::VectorXd singular_values;  // non-increasing, one per snapshot
  Eigen::MatrixXd modes;            // N_x x stored modes
  int rank = 0;

  [[nodiscard]] double eigenvalue(int i) const {
    return singular_values[i] * singular_values[i];
  }
  [[nodiscard]] int stored_modes() const { return static_cast<int>(modes.cols()); }
};

/// POD of the snapshots Y (one column per time) with spatial weight W and
/// temporal quadrature weights w, i.e. of the operator K f = sum_n w_n y_n f_n.
/// An all-zero Y yields rank 0.
PodBasis compute_pod(const Eigen::MatrixXd& Y, const BlockDiagonalMatrix& W,
                     const Eigen::VectorXd& time_weights, const PodOptions& options = {},
                     std::string variable = {});

/// As compute_pod, but may overwrite Y to avoid a second snapshot-sized buffer.
PodBasis compute_pod_in_place(Eigen::MatrixXd& Y, const BlockDiagonalMatrix& W,
                              const Eigen::VectorXd& time_weights, const PodOptions& options = {},
                              std::string variable = {});

/// Uniform temporal weights dt for N snapshots (piecewise-constant extension).
Eigen::VectorXd uniform_time_weights(int N, double dt);

struct Projection {
  Eigen::VectorXd reduced;  // D_r^T W x
  Eigen::VectorXd full;     // D_r D_r^T W x
};

/// W-orthogonal projection onto the first r modes; throws if r exceeds the stored modes.
Projection project(const Eigen::VectorXd& x, const PodBasis& basis, const BlockDiagonalMatrix& W,
                   int r);

/// sum_{i>r} lambda_i over the numerical rank.
double projection_error_tail(const PodBasis& basis, int r);

/// Two sides of a projection-error identity and the scale used to compare them.
struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;

  [[nodiscard]] double discrepancy() const;
};

/// lhs = sum_n w_n |y_n - P_r y_n|_K^2, rhs = sum_{i>r} lambda_i |phi_i|_K^2 for the
/// quadratic form x^T K x; scale = sum_n w_n |y_n|_K^2.
IdentityCheck projection_identity(const Eigen::MatrixXd& Y, const Eigen::VectorXd& time_weights,
                                  const PodBasis& basis, const BlockDiagonalMatrix& W,
                                  const SparseMatrix& K, int r);

}  // namespace hdgpod
