#include "doctest.h"
#include "oracles.hpp"

#include "hdgpod/analysis.hpp"
#include "hdgpod/rom.hpp"

#include <cmath>

using namespace hdgpod;

namespace {

struct Pipeline {
  std::shared_ptr<const Discretization> disc;
  HdgSystem system;
  Eigen::VectorXd beta0;
  SnapshotSet fom;
  PodBasis q, u, uhat;
};

Pipeline make_pipeline(int dim, int n, double dt, double T) {
  Pipeline p{make_discretization(dim, n, 1), {}, {}, {}, {}, {}, {}};
  p.system = assemble_hdg(p.disc, 1.0, 1.0);
  p.beta0 = solve_initial(p.system, assemble_load(*p.disc, [](const Point& x) {
    return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::exp(x[0]) * (1.0 + x[2]);
  }));
  p.fom = run(p.system, dt, T, {}, p.beta0);
  const Eigen::VectorXd w = uniform_time_weights(p.fom.size(), dt);
  p.q = compute_pod(p.fom.flux, p.system.A7, w, {}, "q");
  p.u = compute_pod(p.fom.scalar, p.system.M, w, {}, "u");
  p.uhat = compute_pod(p.fom.trace, p.system.A8, w, {}, "uhat");
  return p;
}

}  // namespace

TEST_CASE("full-rank reduced model reproduces the full model") {
  const double dt = 0.02;
  Pipeline p = make_pipeline(2, 3, dt, 0.6);
  const ReducedModel m = build_reduced(p.system, p.q, p.u, p.uhat, p.q.rank, p.u.rank, p.uhat.rank);
  const ReducedTrajectory rom = rom_run(m, dt, 0.6, reduced_initial(m, p.system, p.beta0));
  REQUIRE(rom.times.size() == p.fom.times.size());
  double worst = 0.0;
  for (int n = 0; n < p.fom.size(); ++n) {
    const Eigen::VectorXd b = rom.scalar.col(n);
    const FluxTrace ft = recover_flux_trace(m, b);
    worst = std::max(worst, (lift(m.D2, b) - p.fom.scalar.col(n)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (lift(m.D1, ft.flux) - p.fom.flux.col(n)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (lift(m.D3, ft.trace) - p.fom.trace.col(n)).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-8);
  const ErrorReport e = trajectory_errors(p.fom, m, rom, p.system);
  CHECK(e.q_error <= 1e-9);
  CHECK(e.u_error <= 1e-9);
}

TEST_CASE("errors shrink as the reduced order grows") {
  const double dt = 0.02;
  Pipeline p = make_pipeline(2, 3, dt, 0.6);
  double prev = 1e300;
  for (int r : {1, 3, 5}) {
    const ReducedModel m = build_reduced(p.system, p.q, p.u, p.uhat, r, r, r);
    const ReducedTrajectory rom = rom_run(m, dt, 0.6, reduced_initial(m, p.system, p.beta0));
    const double e = trajectory_errors(p.fom, m, rom, p.system).u_error;
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("reduced operator structure") {
  Pipeline p = make_pipeline(2, 3, 0.02, 0.6);
  const ReducedModel m = build_reduced(p.system, p.q, p.u, p.uhat, 4, 4, 4);
  CHECK(m.G.rows() == 4);
  CHECK(m.H.rows() == 4);
  CHECK(m.operator_matrix.rows() == 4);
  const ReducedStructure s = reduced_structure(m);
  CHECK(s.b1_min_eig >= p.system.c_min() - 1e-10);
  CHECK(s.b6_min_eig >= p.system.tau_min() - 1e-10);
  CHECK(s.asymmetry <= 1e-9);
  CHECK(s.sym_min_eig >= -1e-9);
  // Modes are orthonormal in M, so B4 reduces to D2^T A4 D2 and the mass to I.
  CHECK((m.D2.transpose() * p.system.M.apply(m.D2) - Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
}

TEST_CASE("reduced energy decays without a source") {
  Pipeline p = make_pipeline(3, 1, 0.05, 0.5);
  const ReducedModel m = build_reduced(p.system, p.q, p.u, p.uhat, 2, 2, 2);
  const ReducedTrajectory rom = rom_run(m, 0.05, 0.5, reduced_initial(m, p.system, p.beta0));
  for (int n = 1; n < rom.scalar.cols(); ++n)
    CHECK(rom.scalar.col(n).norm() <= rom.scalar.col(n - 1).norm() * (1 + 1e-12));
}

TEST_CASE("invalid orders throw") {
  Pipeline p = make_pipeline(2, 2, 0.05, 0.5);
  CHECK_THROWS_AS(build_reduced(p.system, p.q, p.u, p.uhat, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_reduced(p.system, p.q, p.u, p.uhat, 1, p.u.stored_modes() + 1, 1),
                  std::invalid_argument);
  const ReducedModel m = build_reduced(p.system, p.q, p.u, p.uhat, 1, 1, 1);
  CHECK_THROWS(rom_run(m, -0.1, 1.0, Eigen::VectorXd::Ones(1)));
  CHECK_THROWS(rom_run(m, 0.1, 1.0, Eigen::VectorXd::Ones(2)));
}
