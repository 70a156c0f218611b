#pragma once

#include "hdgpod/assembly.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace hdgpod {

/// Flux, scalar and trace coefficients at one time level.
struct HdgState {
  Eigen::VectorXd alpha;  // flux, length N1
  Eigen::VectorXd beta;   // scalar, length N2
  Eigen::VectorXd gamma;  // trace, length N3
};

/// Time-indexed coefficient snapshots; column n holds the state at times[n].
struct SnapshotSet {
  std::vector<double> times;
  Eigen::MatrixXd flux;    // N1 x N
  Eigen::MatrixXd scalar;  // N2 x N
  Eigen::MatrixXd trace;   // N3 x N
  Eigen::VectorXd initial_scalar;

  [[nodiscard]] int size() const { return static_cast<int>(times.size()); }
};

/// Load vector b1(t) = [(f(t), phi_i)]; an empty function means f = 0.
using LoadFunction = std::function<Eigen::VectorXd(double)>;

/// beta0 with M beta0 = b2.
Eigen::VectorXd solve_initial(const HdgSystem& system, const Eigen::VectorXd& b2);

/// Backward Euler stepper with the HDG local solver.
///
/// The flux and scalar unknowns are eliminated element by element, which
/// leaves the time-independent trace system S gamma = g with
/// S = A3^T A1~ + A5^T A2~ - A6. -S is symmetric positive definite and is
/// factorised once.
class CondensedStepper {
 public:
  CondensedStepper(const HdgSystem& system, double dt);
  ~CondensedStepper();
  CondensedStepper(CondensedStepper&&) noexcept;
  CondensedStepper& operator=(CondensedStepper&&) noexcept;

  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] const HdgSystem& system() const { return *system_; }

  /// One backward Euler step from beta_prev with load b1(t_n) (may be empty for f = 0).
  [[nodiscard]] HdgState step(const Eigen::VectorXd& beta_prev, const Eigen::VectorXd& load) const;

  /// Q = A2^T A1^{-1} A2 + M / dt + A4, block diagonal per element.
  [[nodiscard]] const BlockDiagonalMatrix& local_matrix() const { return q_; }
  [[nodiscard]] const SparseMatrix& trace_matrix() const { return s_; }
  /// Solves S x = y with the stored factorisation.
  [[nodiscard]] Eigen::VectorXd solve_trace(const Eigen::VectorXd& y) const;

 private:
  struct ElementSolver {
    Eigen::MatrixXd q_inv;         // ns x ns
    Eigen::MatrixXd lift;          // A1^{-1} A2 restricted to K, (d ns) x ns
    Eigen::MatrixXd coupling;      // P = A5_K + A2_K^T A1_K^{-1} A3_K, ns x m
    Eigen::MatrixXd alpha_trace;   // A1~ restricted to K, (d ns) x m
    Eigen::MatrixXd beta_trace;    // A2~ restricted to K, ns x m
  };
  class TraceSolver;

  const HdgSystem* system_;
  double dt_;
  std::vector<ElementSolver> elements_;
  BlockDiagonalMatrix q_;
  SparseMatrix s_;
  std::unique_ptr<TraceSolver> solver_;
};

/// Residual of the backward Euler system, relative to the norm of its right-hand side.
double step_residual(const HdgSystem& system, double dt, const Eigen::VectorXd& beta_prev,
                     const Eigen::VectorXd& load, const HdgState& state);

/// Number of steps N with N dt = T; throws unless T / dt is integral to 1e-9.
int step_count(double dt, double T);

/// Receives (step index n >= 1, time t_n, state) for every step.
using StepObserver = std::function<void(int, double, const HdgState&)>;

/// Runs N = T / dt steps from beta0 and reports each state to the observer.
void run_steps(const CondensedStepper& stepper, double T, const LoadFunction& load,
               const Eigen::VectorXd& beta0, const StepObserver& observer);

/// Full-order run recording snapshots at t_1..t_N.
SnapshotSet run(const HdgSystem& system, double dt, double T, const LoadFunction& load,
                const Eigen::VectorXd& beta0);

}  // namespace hdgpod
