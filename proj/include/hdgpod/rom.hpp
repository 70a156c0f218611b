#pragma once

#include "hdgpod/assembly.hpp"
#include "hdgpod/fom.hpp"
#include "hdgpod/pod.hpp"

#include <vector>

namespace hdgpod {

/// HDG-POD reduced model in the scalar coefficients b only:
///
///   b' + (B2^T G + B4 - B5 H) b = z,   a = G b,   c = H b,
///
/// where B_j are the HDG blocks compressed with the mode matrices D1 (flux),
/// D2 (scalar) and D3 (trace).
struct ReducedModel {
  int r1 = 0, r2 = 0, r3 = 0;
  Eigen::MatrixXd D1, D2, D3;
  Eigen::MatrixXd B1, B2, B3, B4, B5, B6;
  Eigen::MatrixXd G;  // r1 x r2
  Eigen::MatrixXd H;  // r3 x r2
  Eigen::MatrixXd operator_matrix;  // B2^T G + B4 - B5 H
};

/// Builds the reduced model from the leading r1, r2, r3 modes. Throws
/// std::invalid_argument for r outside [1, stored modes] and std::runtime_error
/// if B6 + B3^T B1^{-1} B3 is numerically singular.
ReducedModel build_reduced(const HdgSystem& system, const PodBasis& flux, const PodBasis& scalar,
                           const PodBasis& trace, int r1, int r2, int r3);

/// Reduced coordinates D2^T M beta0 of the projected initial condition.
Eigen::VectorXd reduced_initial(const ReducedModel& model, const HdgSystem& system,
                                const Eigen::VectorXd& beta0);

struct ReducedTrajectory {
  std::vector<double> times;
  Eigen::MatrixXd scalar;  // r2 x N, b^n at t_1..t_N
};

/// Backward Euler (I + dt A) b^n = b^{n-1} + dt z(t_n), z = D2^T b1(t_n).
ReducedTrajectory rom_run(const ReducedModel& model, double dt, double T,
                          const Eigen::VectorXd& b0, const LoadFunction& load = {});

struct FluxTrace {
  Eigen::VectorXd flux;   // a = G b
  Eigen::VectorXd trace;  // c = H b
};

FluxTrace recover_flux_trace(const ReducedModel& model, const Eigen::VectorXd& b);

/// Full-space coefficients D x of reduced coordinates x.
Eigen::VectorXd lift(const Eigen::MatrixXd& modes, const Eigen::VectorXd& coeffs);

}  // namespace hdgpod
