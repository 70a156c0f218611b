#include "hdgpod/fom.hpp"

#include "hdgpod/parallel.hpp"

#include <Eigen/SparseCholesky>
#ifdef HDGPOD_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdgpod {

class CondensedStepper::TraceSolver {
 public:
  explicit TraceSolver(const SparseMatrix& negative_s) {
    if (negative_s.rows() == 0) return;
    solver_.compute(negative_s);
    if (solver_.info() != Eigen::Success)
      throw std::runtime_error("factorisation of the condensed trace system failed");
  }

  // Solves (-S) x = y.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& y) const {
    if (y.size() == 0) return y;
    Eigen::VectorXd x = solver_.solve(y);
    if (solver_.info() != Eigen::Success) throw std::runtime_error("trace solve failed");
    return x;
  }

 private:
#ifdef HDGPOD_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> solver_;
#else
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> solver_;
#endif
};

Eigen::VectorXd solve_initial(const HdgSystem& system, const Eigen::VectorXd& b2) {
  if (b2.size() != system.M.rows()) throw std::invalid_argument("solve_initial: size mismatch");
  Eigen::VectorXd beta0(b2.size());
  for (std::size_t b = 0; b < system.M.num_blocks(); ++b) {
    const auto& blk = system.M.block(b);
    beta0.segment(system.M.offset(b), blk.rows()) =
        blk.llt().solve(b2.segment(system.M.offset(b), blk.rows()));
  }
  return beta0;
}

CondensedStepper::CondensedStepper(const HdgSystem& system, double dt)
    : system_(&system), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const DofLayout& L = system.layout();
  const int d = L.dim;
  const int ns = L.scalar_per_element;
  const int E = L.num_elements;
  elements_.resize(E);
  std::vector<Eigen::MatrixXd> q_blocks(E);
  std::vector<Eigen::MatrixXd> s_local(E);

  parallel_for(E, [&](int e) {
    const ElementBlocks& b = system.local[e];
    Eigen::LLT<Eigen::MatrixXd> a1(b.flux_mass);
    if (a1.info() != Eigen::Success)
      throw std::runtime_error("flux mass block of element " + std::to_string(e) +
                               " is not positive definite");
    Eigen::MatrixXd lift(d * ns, ns);
    Eigen::MatrixXd a1_inv_a3(d * ns, b.trace_flux.cols());
    for (int a = 0; a < d; ++a) {
      lift.middleRows(a * ns, ns) = a1.solve(b.divergence.middleRows(a * ns, ns));
      a1_inv_a3.middleRows(a * ns, ns) = a1.solve(b.trace_flux.middleRows(a * ns, ns));
    }
    Eigen::MatrixXd q = b.divergence.transpose() * lift + b.mass / dt + b.stabilization;
    q = 0.5 * (q + q.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> qf(q);
    if (qf.info() != Eigen::Success)
      throw std::runtime_error("local matrix Q of element " + std::to_string(e) +
                               " is not positive definite");
    ElementSolver& es = elements_[e];
    es.q_inv = qf.solve(Eigen::MatrixXd::Identity(ns, ns));
    es.lift = std::move(lift);
    es.coupling = b.trace_scalar + b.divergence.transpose() * a1_inv_a3;
    es.beta_trace = es.q_inv * es.coupling;
    es.alpha_trace = es.lift * es.beta_trace - a1_inv_a3;
    s_local[e] = b.trace_flux.transpose() * es.alpha_trace + b.trace_scalar.transpose() * es.beta_trace;
    q_blocks[e] = std::move(q);
  });
  q_ = BlockDiagonalMatrix(std::move(q_blocks));

  std::vector<Eigen::Triplet<double>> trip;
  for (int e = 0; e < E; ++e) {
    const auto& dofs = system.local[e].trace_dofs;
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      if (dofs[i] < 0) continue;
      for (std::size_t j = 0; j < dofs.size(); ++j)
        if (dofs[j] >= 0)
          trip.emplace_back(dofs[i], dofs[j], s_local[e](static_cast<long>(i), static_cast<long>(j)));
    }
  }
  for (std::size_t b = 0; b < system.A6.num_blocks(); ++b) {
    const auto& blk = system.A6.block(b);
    const auto off = system.A6.offset(b);
    for (long i = 0; i < blk.rows(); ++i)
      for (long j = 0; j < blk.cols(); ++j) trip.emplace_back(off + i, off + j, -blk(i, j));
  }
  s_.resize(L.n3(), L.n3());
  s_.setFromTriplets(trip.begin(), trip.end());
  const SparseMatrix neg = -s_;
  solver_ = std::make_unique<TraceSolver>(neg);
}

CondensedStepper::~CondensedStepper() = default;
CondensedStepper::CondensedStepper(CondensedStepper&&) noexcept = default;
CondensedStepper& CondensedStepper::operator=(CondensedStepper&&) noexcept = default;

Eigen::VectorXd CondensedStepper::solve_trace(const Eigen::VectorXd& y) const {
  return solver_->solve(-y);
}

HdgState CondensedStepper::step(const Eigen::VectorXd& beta_prev,
                                const Eigen::VectorXd& load) const {
  const HdgSystem& sys = *system_;
  const DofLayout& L = sys.layout();
  const int d = L.dim;
  const int ns = L.scalar_per_element;
  const int E = L.num_elements;
  if (beta_prev.size() != L.n2()) throw std::invalid_argument("step: beta size mismatch");
  const bool has_load = load.size() > 0;
  if (has_load && load.size() != L.n2()) throw std::invalid_argument("step: load size mismatch");

  // b2~ per element, then the trace right-hand side g = -sum_K P_K^T b2~_K.
  Eigen::MatrixXd beta_free(ns, E);
  parallel_for(E, [&](int e) {
    Eigen::VectorXd rhs = sys.local[e].mass * beta_prev.segment(static_cast<long>(e) * ns, ns) / dt_;
    if (has_load) rhs += load.segment(static_cast<long>(e) * ns, ns);
    beta_free.col(e) = elements_[e].q_inv * rhs;
  });
  Eigen::VectorXd g = Eigen::VectorXd::Zero(L.n3());
  for (int e = 0; e < E; ++e) {
    const auto& dofs = sys.local[e].trace_dofs;
    const Eigen::VectorXd ge = elements_[e].coupling.transpose() * beta_free.col(e);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      if (dofs[i] >= 0) g[dofs[i]] -= ge[static_cast<long>(i)];
  }

  HdgState out;
  out.gamma = solve_trace(g);
  out.alpha.resize(L.n1());
  out.beta.resize(L.n2());
  parallel_for(E, [&](int e) {
    const auto& dofs = sys.local[e].trace_dofs;
    Eigen::VectorXd gl(static_cast<long>(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i)
      gl[static_cast<long>(i)] = dofs[i] >= 0 ? out.gamma[dofs[i]] : 0.0;
    const ElementSolver& es = elements_[e];
    const Eigen::VectorXd beta = es.beta_trace * gl + beta_free.col(e);
    const Eigen::VectorXd alpha = es.alpha_trace * gl + es.lift * beta_free.col(e);
    out.beta.segment(static_cast<long>(e) * ns, ns) = beta;
    for (int a = 0; a < d; ++a) out.alpha.segment(L.flux(a, e, 0), ns) = alpha.segment(a * ns, ns);
  });
  return out;
}

double step_residual(const HdgSystem& system, double dt, const Eigen::VectorXd& beta_prev,
                     const Eigen::VectorXd& load, const HdgState& s) {
  Eigen::VectorXd rhs = system.M.apply(beta_prev) / dt;
  if (load.size() > 0) rhs += load;
  const Eigen::VectorXd r1 = system.A1.apply(s.alpha) - system.A2 * s.beta + system.A3 * s.gamma;
  const Eigen::VectorXd r2 = system.A2.transpose() * s.alpha + system.M.apply(s.beta) / dt +
                             system.A4.apply(s.beta) - system.A5 * s.gamma - rhs;
  const Eigen::VectorXd r3 =
      system.A3.transpose() * s.alpha + system.A5.transpose() * s.beta - system.A6.apply(s.gamma);
  const double num = std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
  const double den = rhs.norm();
  if (den == 0.0) return num;
  return num / den;
}

int step_count(double dt, double T) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("final time must be positive");
  const double ratio = T / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("final time is not an integer multiple of the time step");
  return static_cast<int>(n);
}

void run_steps(const CondensedStepper& stepper, double T, const LoadFunction& load,
               const Eigen::VectorXd& beta0, const StepObserver& observer) {
  const double dt = stepper.dt();
  const int N = step_count(dt, T);
  Eigen::VectorXd beta = beta0;
  const Eigen::VectorXd no_load;
  for (int n = 1; n <= N; ++n) {
    const double t = n * dt;
    HdgState s = load ? stepper.step(beta, load(t)) : stepper.step(beta, no_load);
    observer(n, t, s);
    beta = std::move(s.beta);
  }
}

SnapshotSet run(const HdgSystem& system, double dt, double T, const LoadFunction& load,
                const Eigen::VectorXd& beta0) {
  const CondensedStepper stepper(system, dt);
  const int N = step_count(dt, T);
  const DofLayout& L = system.layout();
  SnapshotSet snaps;
  snaps.initial_scalar = beta0;
  snaps.times.reserve(N);
  snaps.flux.resize(L.n1(), N);
  snaps.scalar.resize(L.n2(), N);
  snaps.trace.resize(L.n3(), N);
  run_steps(stepper, T, load, beta0, [&](int n, double t, const HdgState& s) {
    snaps.times.push_back(t);
    snaps.flux.col(n - 1) = s.alpha;
    snaps.scalar.col(n - 1) = s.beta;
    snaps.trace.col(n - 1) = s.gamma;
  });
  return snaps;
}

}  // namespace hdgpod
