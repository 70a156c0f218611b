#include "hdgpod/rom.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdgpod {

namespace {

void check_rank(const PodBasis& basis, int r, const char* name) {
  if (r < 1 || r > basis.stored_modes())
    throw std::invalid_argument(std::string(name) + " = " + std::to_string(r) +
                                " must lie in [1, " + std::to_string(basis.stored_modes()) + "]");
}

}  // namespace

ReducedModel build_reduced(const HdgSystem& system, const PodBasis& flux, const PodBasis& scalar,
                           const PodBasis& trace, int r1, int r2, int r3) {
  check_rank(flux, r1, "r1");
  check_rank(scalar, r2, "r2");
  check_rank(trace, r3, "r3");
  ReducedModel m;
  m.r1 = r1;
  m.r2 = r2;
  m.r3 = r3;
  m.D1 = flux.modes.leftCols(r1);
  m.D2 = scalar.modes.leftCols(r2);
  m.D3 = trace.modes.leftCols(r3);

  m.B1 = m.D1.transpose() * system.A1.apply(m.D1);
  m.B2 = m.D1.transpose() * (system.A2 * m.D2);
  m.B3 = m.D1.transpose() * (system.A3 * m.D3);
  m.B4 = m.D2.transpose() * system.A4.apply(m.D2);
  m.B5 = m.D2.transpose() * (system.A5 * m.D3);
  m.B6 = m.D3.transpose() * system.A6.apply(m.D3);

  const Eigen::LLT<Eigen::MatrixXd> b1(m.B1);
  if (b1.info() != Eigen::Success) throw std::runtime_error("B1 is not positive definite");
  const Eigen::MatrixXd b1_inv_b2 = b1.solve(m.B2);
  const Eigen::MatrixXd b1_inv_b3 = b1.solve(m.B3);
  Eigen::MatrixXd schur = m.B6 + m.B3.transpose() * b1_inv_b3;
  schur = 0.5 * (schur + schur.transpose()).eval();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(schur, Eigen::EigenvaluesOnly).eigenvalues();
  if (!(ev.minCoeff() > 1e-14 * ev.cwiseAbs().maxCoeff()))
    throw std::runtime_error("B6 + B3^T B1^{-1} B3 is numerically singular");
  const Eigen::LLT<Eigen::MatrixXd> schur_f(schur);
  const Eigen::MatrixXd rhs = m.B5.transpose() + m.B3.transpose() * b1_inv_b2;
  m.H = schur_f.solve(rhs);
  m.G = b1_inv_b2 - b1_inv_b3 * m.H;
  m.operator_matrix = m.B2.transpose() * m.G + m.B4 - m.B5 * m.H;
  return m;
}

Eigen::VectorXd reduced_initial(const ReducedModel& model, const HdgSystem& system,
                                const Eigen::VectorXd& beta0) {
  return model.D2.transpose() * system.M.apply(beta0);
}

ReducedTrajectory rom_run(const ReducedModel& model, double dt, double T, const Eigen::VectorXd& b0,
                          const LoadFunction& load) {
  const int N = step_count(dt, T);
  if (b0.size() != model.r2) throw std::invalid_argument("rom_run: initial state size mismatch");
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(model.r2, model.r2) + dt * model.operator_matrix;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
  ReducedTrajectory traj;
  traj.times.reserve(N);
  traj.scalar.resize(model.r2, N);
  Eigen::VectorXd b = b0;
  for (int n = 1; n <= N; ++n) {
    const double t = n * dt;
    Eigen::VectorXd rhs = b;
    if (load) rhs += dt * (model.D2.transpose() * load(t));
    b = lu.solve(rhs);
    traj.times.push_back(t);
    traj.scalar.col(n - 1) = b;
  }
  return traj;
}

FluxTrace recover_flux_trace(const ReducedModel& model, const Eigen::VectorXd& b) {
  return {model.G * b, model.H * b};
}

Eigen::VectorXd lift(const Eigen::MatrixXd& modes, const Eigen::VectorXd& coeffs) {
  if (modes.cols() != coeffs.size()) throw std::invalid_argument("lift: size mismatch");
  return modes * coeffs;
}

}  // namespace hdgpod
