#include "hdgpod/block_diagonal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace hdgpod {

BlockDiagonalMatrix::BlockDiagonalMatrix(std::vector<Eigen::MatrixXd> blocks)
    : blocks_(std::move(blocks)) {
  index();
}

void BlockDiagonalMatrix::index() {
  offsets_.resize(blocks_.size());
  dim_ = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].rows() != blocks_[b].cols())
      throw std::invalid_argument("block " + std::to_string(b) + " is not square");
    offsets_[b] = dim_;
    dim_ += blocks_[b].rows();
  }
}

Eigen::MatrixXd BlockDiagonalMatrix::apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.rows() != dim_) throw std::invalid_argument("BlockDiagonalMatrix::apply: size mismatch");
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto n = blocks_[b].rows();
    y.middleRows(offsets_[b], n).noalias() = blocks_[b] * x.middleRows(offsets_[b], n);
  }
  return y;
}

double BlockDiagonalMatrix::quadratic(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double s = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto xb = x.segment(offsets_[b], blocks_[b].rows());
    s += xb.dot(blocks_[b] * xb);
  }
  return s;
}

BlockDiagonalMatrix BlockDiagonalMatrix::inverse() const {
  std::vector<Eigen::MatrixXd> inv;
  inv.reserve(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(blocks_[b]);
    if (!lu.isInvertible())
      throw std::runtime_error("block " + std::to_string(b) + " is singular");
    inv.push_back(lu.inverse());
  }
  return BlockDiagonalMatrix(std::move(inv));
}

BlockDiagonalMatrix BlockDiagonalMatrix::cholesky_factor() const {
  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    Eigen::LLT<Eigen::MatrixXd> llt(blocks_[b]);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("block " + std::to_string(b) + " is not positive definite");
    factors.emplace_back(llt.matrixL());
  }
  return BlockDiagonalMatrix(std::move(factors));
}

void BlockDiagonalMatrix::solve_upper_transpose(Eigen::Ref<Eigen::MatrixXd> y) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto n = blocks_[b].rows();
    auto yb = y.middleRows(offsets_[b], n);
    blocks_[b].triangularView<Eigen::Lower>().transpose().solveInPlace(yb);
  }
}

void BlockDiagonalMatrix::apply_upper_transpose(Eigen::Ref<Eigen::MatrixXd> y) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto n = blocks_[b].rows();
    auto yb = y.middleRows(offsets_[b], n);
    const Eigen::MatrixXd tmp = blocks_[b].triangularView<Eigen::Lower>().transpose() * yb;
    yb = tmp;
  }
}

BlockDiagonalMatrix BlockDiagonalMatrix::scaled(double s) const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(s * b);
  return BlockDiagonalMatrix(std::move(out));
}

SparseMatrix BlockDiagonalMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (Eigen::Index j = 0; j < blocks_[b].cols(); ++j)
      for (Eigen::Index i = 0; i < blocks_[b].rows(); ++i)
        if (blocks_[b](i, j) != 0.0)
          trip.emplace_back(offsets_[b] + i, offsets_[b] + j, blocks_[b](i, j));
  SparseMatrix s(dim_, dim_);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

double BlockDiagonalMatrix::asymmetry() const {
  double num = 0.0, den = 0.0;
  for (const auto& b : blocks_) {
    num = std::max(num, (b - b.transpose()).cwiseAbs().maxCoeff());
    den = std::max(den, b.cwiseAbs().maxCoeff());
  }
  return den > 0.0 ? num / den : 0.0;
}

bool BlockDiagonalMatrix::is_positive_definite() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Eigen::MatrixXd& b) {
    return Eigen::LLT<Eigen::MatrixXd>(b).info() == Eigen::Success;
  });
}

double BlockDiagonalMatrix::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) {
    const Eigen::MatrixXd sym = 0.5 * (b + b.transpose());
    m = std::min(m, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff());
  }
  return m;
}

}  // namespace hdgpod
