#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace hdgpod {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Block diagonal matrix with small dense blocks laid out contiguously.
class BlockDiagonalMatrix {
 public:
  BlockDiagonalMatrix() = default;
  explicit BlockDiagonalMatrix(std::vector<Eigen::MatrixXd> blocks);

  [[nodiscard]] Eigen::Index rows() const { return dim_; }
  [[nodiscard]] Eigen::Index cols() const { return dim_; }
  [[nodiscard]] std::size_t num_blocks() const { return blocks_.size(); }
  [[nodiscard]] const Eigen::MatrixXd& block(std::size_t b) const { return blocks_[b]; }
  [[nodiscard]] Eigen::MatrixXd& block(std::size_t b) { return blocks_[b]; }
  [[nodiscard]] Eigen::Index offset(std::size_t b) const { return offsets_[b]; }

  /// y = A x for a vector or for each column of a matrix.
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  /// x^T A x.
  [[nodiscard]] double quadratic(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Blockwise inverse; throws std::runtime_error naming the first singular block.
  [[nodiscard]] BlockDiagonalMatrix inverse() const;
  /// Blockwise lower Cholesky factor L with A = L L^T; throws if a block is not SPD.
  [[nodiscard]] BlockDiagonalMatrix cholesky_factor() const;
  /// Solve L^T x = y blockwise for a lower-triangular block matrix (in place on columns).
  void solve_upper_transpose(Eigen::Ref<Eigen::MatrixXd> y) const;
  /// y <- L^T y blockwise for a lower-triangular block matrix.
  void apply_upper_transpose(Eigen::Ref<Eigen::MatrixXd> y) const;

  [[nodiscard]] BlockDiagonalMatrix scaled(double s) const;
  [[nodiscard]] SparseMatrix to_sparse() const;

  /// Largest blockwise |A - A^T| entry relative to the largest |A| entry.
  [[nodiscard]] double asymmetry() const;
  /// True if every block admits a Cholesky factorisation.
  [[nodiscard]] bool is_positive_definite() const;
  /// Smallest eigenvalue over all (symmetrised) blocks.
  [[nodiscard]] double min_eigenvalue() const;

 private:
  void index();

  std::vector<Eigen::MatrixXd> blocks_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index dim_ = 0;
};

}  // namespace hdgpod
