#include "doctest.h"
#include "oracles.hpp"

#include "hdgpod/config.hpp"
#include "hdgpod/fom.hpp"

#include <cmath>

using namespace hdgpod;

namespace {

Eigen::VectorXd smooth_initial(const HdgSystem& sys) {
  return solve_initial(sys, assemble_load(*sys.disc, [](const Point& x) {
    return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]) * std::exp(x[0]) * std::cos(x[1]) *
           (x[2] + 1.0);
  }));
}

double max_diff(const HdgState& a, const HdgState& b) {
  return std::max({(a.alpha - b.alpha).cwiseAbs().maxCoeff(),
                   (a.beta - b.beta).cwiseAbs().maxCoeff(),
                   a.gamma.size() ? (a.gamma - b.gamma).cwiseAbs().maxCoeff() : 0.0});
}

}  // namespace

TEST_CASE("local solver matches the uncondensed system") {
  struct Case { int dim, n, k; };
  for (Case cs : {Case{2, 2, 0}, Case{2, 2, 1}, Case{2, 2, 2}, Case{3, 1, 0}, Case{3, 1, 1},
                  Case{3, 1, 2}}) {
    CAPTURE(cs.dim);
    CAPTURE(cs.k);
    const auto disc = make_discretization(cs.dim, cs.n, cs.k);
    const HdgSystem sys = assemble_hdg(disc, 0.3, 1.7);
    const double dt = 0.05;
    const Eigen::VectorXd beta0 = smooth_initial(sys);
    const auto ref = oracle::saddle_steps(sys, dt, 10, beta0);
    const CondensedStepper stepper(sys, dt);
    Eigen::VectorXd beta = beta0;
    for (int n = 0; n < 10; ++n) {
      const HdgState s = stepper.step(beta, {});
      CHECK(max_diff(s, ref[n]) <= 1e-9);
      CHECK(step_residual(sys, dt, beta, {}, s) <= 1e-9);
      beta = s.beta;
    }
  }
}

TEST_CASE("local solver with a source and variable coefficients") {
  const auto disc = make_discretization(2, 3, 1);
  std::vector<double> c(disc->mesh.num_elements()), tau(disc->mesh.num_faces());
  for (std::size_t e = 0; e < c.size(); ++e) c[e] = 0.5 + 0.1 * static_cast<double>(e % 7);
  for (std::size_t f = 0; f < tau.size(); ++f) tau[f] = 1.0 + 0.2 * static_cast<double>(f % 3);
  const HdgSystem sys = assemble_hdg(disc, c, tau);
  const LoadFunction load = [&](double t) {
    return assemble_load(*disc, [t](const Point& x) { return std::cos(t) * x[0] * (1 - x[1]); });
  };
  const Eigen::VectorXd beta0 = smooth_initial(sys);
  const auto ref = oracle::saddle_steps(sys, 0.1, 5, beta0, load);
  const CondensedStepper stepper(sys, 0.1);
  Eigen::VectorXd beta = beta0;
  for (int n = 0; n < 5; ++n) {
    const HdgState s = stepper.step(beta, load((n + 1) * 0.1));
    CHECK(max_diff(s, ref[n]) <= 1e-9);
    beta = s.beta;
  }
}

TEST_CASE("trace system is symmetric negative definite") {
  const auto disc = make_discretization(2, 1, 1);
  const HdgSystem sys = assemble_hdg(disc, 1.0, 1.0);
  const CondensedStepper stepper(sys, 0.1);
  const Eigen::MatrixXd S = stepper.trace_matrix();
  CHECK(S.rows() == 8);
  CHECK(S.cols() == 8);
  CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues();
  CHECK(ev.maxCoeff() < 0.0);
}

TEST_CASE("zero source runs dissipate energy") {
  const auto disc = make_discretization(2, 4, 1);
  const HdgSystem sys = assemble_hdg(disc, 0.01, 1.0);
  const Eigen::VectorXd beta0 = smooth_initial(sys);
  const SnapshotSet s = run(sys, 0.01, 0.5, {}, beta0);
  REQUIRE(s.size() == 50);
  CHECK(s.times.front() == doctest::Approx(0.01));
  CHECK(s.times.back() == doctest::Approx(0.5));
  double prev = sys.M.quadratic(beta0);
  for (int n = 0; n < s.size(); ++n) {
    const double e = sys.M.quadratic(s.scalar.col(n));
    CHECK(e <= prev * (1 + 1e-14));
    prev = e;
  }
}

TEST_CASE("manufactured solution converges at second order for k = 1") {
  const double dt = 1e-4, T = 0.01;
  const auto exact = [T](const Point& x) {
    return std::exp(-T) * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  };
  std::vector<double> errs;
  for (int n : {8, 16, 32}) {
    RunConfig cfg = preset("manufactured");
    cfg.n = n;
    cfg.dt = dt;
    cfg.T = T;
    const Problem p = build_problem(cfg);
    const SnapshotSet s = run(p.system, dt, T, p.load, p.beta0);
    errs.push_back(oracle::l2_error(*p.disc, s.scalar.col(s.size() - 1), exact));
  }
  MESSAGE("errors " << errs[0] << " " << errs[1] << " " << errs[2]);
  CHECK(std::log2(errs[0] / errs[1]) > 1.7);
  CHECK(std::log2(errs[1] / errs[2]) > 1.85);
}

TEST_CASE("steady state is reached for a constant source") {
  // -div(grad u) = 2 pi^2 sin sin has u = sin sin; run long with large steps.
  const auto disc = make_discretization(2, 8, 2);
  const HdgSystem sys = assemble_hdg(disc, 1.0, 1.0);
  const Eigen::VectorXd b1 = assemble_load(*disc, [](const Point& x) {
    return 2 * M_PI * M_PI * std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  });
  const CondensedStepper stepper(sys, 10.0);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(sys.layout().n2());
  for (int n = 0; n < 20; ++n) beta = stepper.step(beta, b1).beta;
  const double err = oracle::l2_error(*disc, beta, [](const Point& x) {
    return std::sin(M_PI * x[0]) * std::sin(M_PI * x[1]);
  });
  CHECK(err < 2e-3);
}

TEST_CASE("invalid time steps are rejected") {
  const auto disc = make_discretization(2, 1, 0);
  const HdgSystem sys = assemble_hdg(disc, 1.0, 1.0);
  CHECK_THROWS_AS(CondensedStepper(sys, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CondensedStepper(sys, -0.1), std::invalid_argument);
  CHECK_THROWS(step_count(0.3, 1.0));
  CHECK(step_count(0.001, 1.0) == 1000);
}

TEST_CASE("initial projection reproduces polynomials exactly") {
  const auto disc = make_discretization(3, 2, 2);
  const HdgSystem sys = assemble_hdg(disc, 1.0, 1.0);
  const auto u = [](const Point& x) { return 1 + x[0] * x[1] - 2 * x[2] * x[2]; };
  const Eigen::VectorXd beta = solve_initial(sys, assemble_load(*disc, u));
  CHECK(oracle::l2_error(*disc, beta, u) < 1e-12);
}
