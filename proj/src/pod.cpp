#include "hdgpod/pod.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <string>

namespace hdgpod {

namespace {

int count_rank(const Eigen::VectorXd& sigma, double tol) {
  if (sigma.size() == 0 || !(sigma[0] > 0.0)) return 0;
  int r = 0;
  while (r < sigma.size() && sigma[r] > tol * sigma[0]) ++r;
  return r;
}

int stored_count(int rank, const PodOptions& opt) {
  return opt.max_modes < 0 ? rank : std::min(rank, opt.max_modes);
}

PodBasis pod_by_snapshots(const Eigen::MatrixXd& Y, const BlockDiagonalMatrix& W,
                          const Eigen::VectorXd& sqrt_w, const PodOptions& opt) {
  const Eigen::Index N = Y.cols();
  Eigen::MatrixXd G(N, N);
  constexpr Eigen::Index chunk = 64;
  for (Eigen::Index c = 0; c < N; c += chunk) {
    const Eigen::Index nc = std::min(chunk, N - c);
    const Eigen::MatrixXd WY = W.apply(Y.middleCols(c, nc));
    G.middleCols(c, nc).noalias() = Y.transpose() * WY;
  }
  G = sqrt_w.asDiagonal() * G * sqrt_w.asDiagonal();
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  if (eig.info() != Eigen::Success) throw std::runtime_error("Gram eigendecomposition failed");

  PodBasis basis;
  basis.singular_values.resize(N);
  for (Eigen::Index i = 0; i < N; ++i)
    basis.singular_values[i] = std::sqrt(std::max(0.0, eig.eigenvalues()[N - 1 - i]));
  // Gram eigenvalues carry an absolute error of about N eps lambda_1.
  const double floor = std::sqrt(static_cast<double>(N) * std::numeric_limits<double>::epsilon());
  basis.rank = count_rank(basis.singular_values, std::max(opt.rank_tolerance, floor));
  const int keep = stored_count(basis.rank, opt);
  basis.modes.resize(Y.rows(), keep);
  for (int i = 0; i < keep; ++i) {
    const Eigen::VectorXd v = sqrt_w.cwiseProduct(eig.eigenvectors().col(N - 1 - i));
    basis.modes.col(i) = Y * v / basis.singular_values[i];
  }
  return basis;
}

// Z holds the snapshots on entry and is overwritten.
PodBasis pod_by_weighted_svd(Eigen::MatrixXd& Z, const BlockDiagonalMatrix& W,
                             const Eigen::VectorXd& sqrt_w, const PodOptions& opt) {
  const Eigen::Index Nx = Z.rows();
  const Eigen::Index N = Z.cols();
  const BlockDiagonalMatrix L = W.cholesky_factor();
  Z *= sqrt_w.asDiagonal();
  L.apply_upper_transpose(Z);

  PodBasis basis;
  Eigen::MatrixXd U;
  if (Nx >= N) {
    Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(Z);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(N).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullU);
    basis.singular_values = svd.singularValues();
    basis.rank = count_rank(basis.singular_values, opt.rank_tolerance);
    const int keep = stored_count(basis.rank, opt);
    U = Eigen::MatrixXd::Zero(Nx, keep);
    U.topRows(N) = svd.matrixU().leftCols(keep);
    U.applyOnTheLeft(qr.householderQ());
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Z, Eigen::ComputeThinU);
    basis.singular_values = Eigen::VectorXd::Zero(N);
    basis.singular_values.head(svd.singularValues().size()) = svd.singularValues();
    basis.rank = count_rank(basis.singular_values, opt.rank_tolerance);
    U = svd.matrixU().leftCols(stored_count(basis.rank, opt));
  }
  L.solve_upper_transpose(U);
  basis.modes = std::move(U);
  return basis;
}

}  // namespace

Eigen::VectorXd uniform_time_weights(int N, double dt) { return Eigen::VectorXd::Constant(N, dt); }

namespace {

void check_pod_input(const Eigen::MatrixXd& Y, const BlockDiagonalMatrix& W,
                     const Eigen::VectorXd& time_weights) {
  if (Y.rows() != W.rows()) throw std::invalid_argument("compute_pod: weight size mismatch");
  if (time_weights.size() != Y.cols())
    throw std::invalid_argument("compute_pod: need one time weight per snapshot");
  if (time_weights.size() > 0 && !(time_weights.minCoeff() > 0.0))
    throw std::invalid_argument("compute_pod: time weights must be positive");
}

PodBasis empty_basis(const Eigen::MatrixXd& Y) {
  PodBasis basis;
  basis.singular_values = Eigen::VectorXd::Zero(Y.cols());
  basis.modes.resize(Y.rows(), 0);
  return basis;
}

}  // namespace

PodBasis compute_pod(const Eigen::MatrixXd& Y, const BlockDiagonalMatrix& W,
                     const Eigen::VectorXd& time_weights, const PodOptions& options,
                     std::string variable) {
  check_pod_input(Y, W, time_weights);
  PodBasis basis;
  if (Y.cols() == 0 || Y.rows() == 0) {
    basis = empty_basis(Y);
  } else if (options.method == PodMethod::Snapshots) {
    basis = pod_by_snapshots(Y, W, time_weights.cwiseSqrt(), options);
  } else {
    Eigen::MatrixXd Z = Y;
    basis = pod_by_weighted_svd(Z, W, time_weights.cwiseSqrt(), options);
  }
  basis.variable = std::move(variable);
  return basis;
}

PodBasis compute_pod_in_place(Eigen::MatrixXd& Y, const BlockDiagonalMatrix& W,
                              const Eigen::VectorXd& time_weights, const PodOptions& options,
                              std::string variable) {
  if (options.method == PodMethod::Snapshots)
    return compute_pod(Y, W, time_weights, options, std::move(variable));
  check_pod_input(Y, W, time_weights);
  PodBasis basis = Y.size() == 0 ? empty_basis(Y)
                                 : pod_by_weighted_svd(Y, W, time_weights.cwiseSqrt(), options);
  basis.variable = std::move(variable);
  return basis;
}

Projection project(const Eigen::VectorXd& x, const PodBasis& basis, const BlockDiagonalMatrix& W,
                   int r) {
  if (r < 0 || r > basis.stored_modes())
    throw std::invalid_argument("project: r = " + std::to_string(r) + " exceeds the " +
                                std::to_string(basis.stored_modes()) + " available modes");
  const auto D = basis.modes.leftCols(r);
  Projection p;
  p.reduced = D.transpose() * W.apply(x);
  p.full = D * p.reduced;
  return p;
}

double projection_error_tail(const PodBasis& basis, int r) {
  if (r < 0 || r > basis.rank)
    throw std::invalid_argument("projection_error_tail: r exceeds the POD rank");
  double s = 0.0;
  for (int i = basis.rank - 1; i >= r; --i) s += basis.eigenvalue(i);
  return s;
}

double IdentityCheck::discrepancy() const {
  const double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
  return denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
}

IdentityCheck projection_identity(const Eigen::MatrixXd& Y, const Eigen::VectorXd& time_weights,
                                  const PodBasis& basis, const BlockDiagonalMatrix& W,
                                  const SparseMatrix& K, int r) {
  if (basis.stored_modes() < basis.rank)
    throw std::invalid_argument("projection_identity needs all modes up to the rank");
  if (r < 0 || r > basis.rank) throw std::invalid_argument("projection_identity: bad r");
  const auto D = basis.modes.leftCols(r);
  const Eigen::MatrixXd residual = Y - D * (D.transpose() * W.apply(Y));
  IdentityCheck check;
  for (Eigen::Index n = 0; n < Y.cols(); ++n) {
    check.lhs += time_weights[n] * residual.col(n).dot(K * residual.col(n));
    check.scale += time_weights[n] * Y.col(n).dot(K * Y.col(n));
  }
  for (int i = r; i < basis.rank; ++i)
    check.rhs += basis.eigenvalue(i) * basis.modes.col(i).dot(K * basis.modes.col(i));
  return check;
}

}  // namespace hdgpod
