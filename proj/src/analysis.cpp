#include "hdgpod/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace hdgpod {

bool acts_on_flux(Seminorm s) { return s == Seminorm::Divergence || s == Seminorm::NormalTrace; }

std::string to_string(Seminorm s) {
  switch (s) {
    case Seminorm::Gradient: return "gradient";
    case Seminorm::ElementTrace: return "trace";
    case Seminorm::Divergence: return "divergence";
    case Seminorm::NormalTrace: return "normal_trace";
  }
  return "unknown";
}

namespace {

// Element-local Gram matrix of a seminorm; flux blocks are ordered (a, m).
Eigen::MatrixXd local_seminorm(const Discretization& disc, int e, Seminorm which) {
  const SimplicialMesh& mesh = disc.mesh;
  const ReferenceBasis& basis = disc.basis;
  const int d = mesh.dim();
  const int ns = basis.num_scalar();
  const Eigen::MatrixXd J = mesh.jacobian(e);
  const Eigen::MatrixXd Jinv = J.inverse();
  const double detJ = J.determinant();
  const int n = acts_on_flux(which) ? d * ns : ns;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);

  if (which == Seminorm::Gradient || which == Seminorm::Divergence) {
    const QuadratureRule& rule = basis.element_quadrature();
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * detJ;
      const Eigen::MatrixXd grad = basis.gradient_table()[q] * Jinv;  // ns x d
      if (which == Seminorm::Gradient) {
        K.noalias() += w * grad * grad.transpose();
      } else {
        Eigen::VectorXd div(n);  // d_a phi_m for dof (a, m)
        for (int a = 0; a < d; ++a) div.segment(a * ns, ns) = grad.col(a);
        K.noalias() += w * div * div.transpose();
      }
    }
    return K;
  }

  const QuadratureRule& frule = basis.face_quadrature();
  for (int i = 0; i <= d; ++i) {
    const int f = mesh.element_face(e, i);
    const Point nrm = mesh.outward_normal(e, i);
    const double scale = face_reference_scale(d, mesh.face(f).measure);
    for (int q = 0; q < frule.size(); ++q) {
      const double w = frule.weights[q] * scale;
      const Eigen::VectorXd phi =
          basis.scalar_values(face_point_to_element(mesh, f, e, Jinv, frule.points.col(q)));
      if (which == Seminorm::ElementTrace) {
        K.noalias() += w * phi * phi.transpose();
      } else {
        Eigen::VectorXd vn(n);
        for (int a = 0; a < d; ++a) vn.segment(a * ns, ns) = nrm[a] * phi;
        K.noalias() += w * vn * vn.transpose();
      }
    }
  }
  return K;
}

}  // namespace

SparseMatrix seminorm_matrix(const Discretization& disc, Seminorm which) {
  const DofLayout& L = disc.layout;
  const int ns = L.scalar_per_element;
  const bool flux = acts_on_flux(which);
  const int size = flux ? L.n1() : L.n2();
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> dofs;
  for (int e = 0; e < L.num_elements; ++e) {
    const Eigen::MatrixXd K = local_seminorm(disc, e, which);
    dofs.clear();
    if (flux) {
      for (int a = 0; a < L.dim; ++a)
        for (int m = 0; m < ns; ++m) dofs.push_back(L.flux(a, e, m));
    } else {
      for (int m = 0; m < ns; ++m) dofs.push_back(L.scalar(e, m));
    }
    for (std::size_t i = 0; i < dofs.size(); ++i)
      for (std::size_t j = 0; j < dofs.size(); ++j)
        trip.emplace_back(dofs[i], dofs[j], K(static_cast<long>(i), static_cast<long>(j)));
  }
  SparseMatrix S(size, size);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

double broken_seminorm(const Discretization& disc, const Eigen::VectorXd& coeffs, Seminorm which) {
  const int expected = acts_on_flux(which) ? disc.layout.n1() : disc.layout.n2();
  if (coeffs.size() != expected)
    throw std::invalid_argument("broken_seminorm: " + to_string(which) +
                                " is not defined for a vector of this length");
  const SparseMatrix K = seminorm_matrix(disc, which);
  return std::sqrt(std::max(0.0, coeffs.dot(K * coeffs)));
}

ErrorAccumulator::ErrorAccumulator(const HdgSystem& system, const ReducedModel& model)
    : system_(&system), model_(&model) {}

void ErrorAccumulator::add(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                           const Eigen::VectorXd& b) {
  const FluxTrace ft = recover_flux_trace(*model_, b);
  const Eigen::VectorXd dq = alpha - model_->D1 * ft.flux;
  const Eigen::VectorXd du = beta - model_->D2 * b;
  q_sum_ += system_->A7.quadratic(dq);
  u_sum_ += system_->M.quadratic(du);
  ++count_;
}

double ErrorAccumulator::q_error() const {
  return count_ ? std::sqrt(std::max(0.0, q_sum_) / count_) : 0.0;
}

double ErrorAccumulator::u_error() const {
  return count_ ? std::sqrt(std::max(0.0, u_sum_) / count_) : 0.0;
}

ErrorReport trajectory_errors(const SnapshotSet& fom, const ReducedModel& model,
                              const ReducedTrajectory& rom, const HdgSystem& system) {
  if (fom.times.size() != rom.times.size())
    throw std::invalid_argument("trajectory_errors: time grids differ in length");
  for (std::size_t n = 0; n < fom.times.size(); ++n)
    if (std::abs(fom.times[n] - rom.times[n]) > 1e-12 * std::max(1.0, std::abs(fom.times[n])))
      throw std::invalid_argument("trajectory_errors: time grids differ");
  ErrorAccumulator acc(system, model);
  for (int n = 0; n < fom.size(); ++n)
    acc.add(fom.flux.col(n), fom.scalar.col(n), rom.scalar.col(n));
  ErrorReport rep;
  rep.r1 = model.r1;
  rep.r2 = model.r2;
  rep.r3 = model.r3;
  rep.q_error = acc.q_error();
  rep.u_error = acc.u_error();
  return rep;
}

void fill_lambda_terms(ErrorReport& report, const HdgSystem& system, const PodBasis& flux,
                       const PodBasis& scalar, const PodBasis& trace) {
  const Discretization& disc = *system.disc;
  report.tail_q = projection_error_tail(flux, std::min(report.r1, flux.rank));
  report.tail_u = projection_error_tail(scalar, std::min(report.r2, scalar.rank));
  report.tail_uhat = projection_error_tail(trace, std::min(report.r3, trace.rank));
  if (flux.stored_modes() < flux.rank || scalar.stored_modes() < scalar.rank) {
    report.lambda_u = report.lambda_q = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const SparseMatrix Kdiv = seminorm_matrix(disc, Seminorm::Divergence);
  const SparseMatrix Knt = seminorm_matrix(disc, Seminorm::NormalTrace);
  const SparseMatrix Kgrad = seminorm_matrix(disc, Seminorm::Gradient);
  const SparseMatrix Ktr = seminorm_matrix(disc, Seminorm::ElementTrace);
  double q_part = 0.0;
  for (int i = report.r1; i < flux.rank; ++i) {
    const auto phi = flux.modes.col(i);
    q_part += flux.eigenvalue(i) * (1.0 + phi.dot(Knt * phi) + phi.dot(Kdiv * phi));
  }
  double u_semi = 0.0;
  for (int i = report.r2; i < scalar.rank; ++i) {
    const auto phi = scalar.modes.col(i);
    u_semi += scalar.eigenvalue(i) * (phi.dot(Ktr * phi) + phi.dot(Kgrad * phi));
  }
  report.lambda_q = q_part + u_semi + report.tail_uhat;
  report.lambda_u = q_part + u_semi + report.tail_u + report.tail_uhat;
}

double trace_constant(int dim, int k) {
  if (dim == 2) return std::sqrt((k + 1.0) * (k + 2.0) / 2.0);
  if (dim == 3) return std::sqrt((k + 1.0) * (k + 3.0) / 3.0);
  throw std::invalid_argument("trace_constant: dim must be 2 or 3");
}

TraceInequalityResult check_trace_inequality(int dim, int k, int samples, std::uint64_t seed) {
  const ReferenceBasis basis(dim, k);
  const int ns = basis.num_scalar();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const QuadratureRule frule = simplex_quadrature(dim - 1, 2 * k + 2);
  const double sharp = (k + 1.0) * (k + dim) / dim;

  TraceInequalityResult res;
  res.dim = dim;
  res.k = k;
  res.samples = samples;
  res.constant = trace_constant(dim, k);
  for (int s = 0; s < samples; ++s) {
    // Random non-degenerate simplex.
    std::vector<Point> v(dim + 1);
    Eigen::MatrixXd J(dim, dim);
    double vol = 0.0, diam = 0.0;
    for (;;) {
      for (auto& p : v) p = Point(unif(rng), unif(rng), dim == 3 ? unif(rng) : 0.0);
      for (int c = 0; c < dim; ++c) J.col(c) = (v[c + 1] - v[0]).head(dim);
      diam = 0.0;
      for (int a = 0; a <= dim; ++a)
        for (int b = a + 1; b <= dim; ++b) diam = std::max(diam, (v[a] - v[b]).norm());
      vol = std::abs(J.determinant()) / (dim == 2 ? 2.0 : 6.0);
      if (vol > 0.05 * std::pow(diam, dim) / (dim == 2 ? 2.0 : 6.0)) break;
    }
    const Eigen::MatrixXd Jinv = J.inverse();
    const double detJ = std::abs(J.determinant());
    const Eigen::VectorXd coeff = Eigen::VectorXd::NullaryExpr(ns, [&] { return normal(rng); });
    // Orthonormal reference basis: |v|_K^2 = |det J| |c|^2.
    const double vol_norm2 = detJ * coeff.squaredNorm();
    double bnd_norm2 = 0.0, bnd_measure = 0.0;
    for (int i = 0; i <= dim; ++i) {
      std::vector<Point> fv;
      for (int j = 0; j <= dim; ++j)
        if (j != i) fv.push_back(v[j]);
      const double measure = dim == 2 ? (fv[1] - fv[0]).norm()
                                      : 0.5 * (fv[1] - fv[0]).cross(fv[2] - fv[0]).norm();
      bnd_measure += measure;
      const double scale = face_reference_scale(dim, measure);
      for (int q = 0; q < frule.size(); ++q) {
        Point x = fv[0];
        for (int j = 0; j < dim - 1; ++j) x += frule.points(j, q) * (fv[j + 1] - fv[0]);
        const Eigen::VectorXd xi = Jinv * (x - v[0]).head(dim);
        const double val = basis.scalar_values(xi).dot(coeff);
        bnd_norm2 += frule.weights[q] * scale * val * val;
      }
    }
    res.max_ratio = std::max(res.max_ratio, std::sqrt(bnd_norm2 * diam / vol_norm2));
    res.max_sharp_ratio =
        std::max(res.max_sharp_ratio, bnd_norm2 / (sharp * bnd_measure / vol * vol_norm2));
  }
  return res;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckEntry& c) { return c.passed || c.informational; });
}

void VerificationReport::write_text(std::ostream& os) const {
  os << std::scientific << std::setprecision(6);
  for (const CheckEntry& c : checks) {
    os << (c.passed ? "PASS " : (c.informational ? "INFO " : "FAIL ")) << c.name
       << "  lhs=" << c.lhs << " rhs=" << c.rhs << " tol=" << c.tolerance << '\n';
  }
  os << (all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
}

void VerificationReport::write_csv(std::ostream& os) const {
  os << "check,lhs,rhs,tolerance,verdict\n" << std::scientific << std::setprecision(9);
  for (const CheckEntry& c : checks)
    os << c.name << ',' << c.lhs << ',' << c.rhs << ',' << c.tolerance << ','
       << (c.passed ? "pass" : (c.informational ? "info" : "fail")) << '\n';
}

double orthonormality_defect(const PodBasis& basis, const BlockDiagonalMatrix& W) {
  if (basis.stored_modes() == 0) return 0.0;
  const Eigen::MatrixXd G = basis.modes.transpose() * W.apply(basis.modes);
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

ReducedStructure reduced_structure(const ReducedModel& model) {
  auto min_eig = [](const Eigen::MatrixXd& A) {
    const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
  };
  ReducedStructure s;
  s.b1_min_eig = min_eig(model.B1);
  s.b6_min_eig = min_eig(model.B6);
  const Eigen::MatrixXd& A = model.operator_matrix;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  s.asymmetry = (A - A.transpose()).cwiseAbs().maxCoeff() / scale;
  s.sym_min_eig = min_eig(A) / scale;
  return s;
}

namespace {

CheckEntry make_check(std::string name, double lhs, double rhs, double tol, bool passed) {
  CheckEntry c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.tolerance = tol;
  c.passed = passed;
  return c;
}

// The requested orders clamped to the rank, plus rank / 2 and rank.
std::vector<int> clamp_ladder(std::vector<int> ladder, int rank) {
  ladder.push_back(rank / 2);
  ladder.push_back(rank);
  std::vector<int> out;
  for (int r : ladder) {
    const int c = std::clamp(r, 0, rank);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

}  // namespace

VerificationReport verify_identities(const VerificationInput& in) {
  if (!in.system || !in.snapshots || !in.flux || !in.scalar || !in.trace)
    throw std::invalid_argument("verify_identities: missing run artifacts");
  const HdgSystem& sys = *in.system;
  const SnapshotSet& snaps = *in.snapshots;
  const Discretization& disc = *sys.disc;
  const Eigen::VectorXd w = uniform_time_weights(snaps.size(), in.dt);
  VerificationReport rep;
  constexpr double kIdentityTol = 1e-8;
  constexpr double kOrthoTol = 1e-10;

  struct Variable {
    const char* name;
    const Eigen::MatrixXd* Y;
    const PodBasis* basis;
    const BlockDiagonalMatrix* W;
  };
  const Variable vars[] = {{"q", &snaps.flux, in.flux, &sys.A7},
                           {"u", &snaps.scalar, in.scalar, &sys.M},
                           {"uhat", &snaps.trace, in.trace, &sys.A8}};

  for (const Variable& v : vars) {
    const double defect = orthonormality_defect(*v.basis, *v.W);
    rep.checks.push_back(make_check(std::string("orthonormality_") + v.name, defect, 0.0,
                                    kOrthoTol, defect <= kOrthoTol));
    const SparseMatrix K = v.W->to_sparse();
    for (int r : clamp_ladder(in.r_values, v.basis->rank)) {
      const IdentityCheck c = projection_identity(*v.Y, w, *v.basis, *v.W, K, r);
      const double tail = projection_error_tail(*v.basis, r);
      rep.checks.push_back(make_check(std::string("l2_identity_") + v.name + "_r" + std::to_string(r),
                                      c.lhs, tail, kIdentityTol,
                                      IdentityCheck{c.lhs, tail, c.scale}.discrepancy() <= kIdentityTol));
    }
  }

  const struct {
    Seminorm which;
    const Eigen::MatrixXd* Y;
    const PodBasis* basis;
    const BlockDiagonalMatrix* W;
  } semis[] = {{Seminorm::Gradient, &snaps.scalar, in.scalar, &sys.M},
               {Seminorm::ElementTrace, &snaps.scalar, in.scalar, &sys.M},
               {Seminorm::Divergence, &snaps.flux, in.flux, &sys.A7},
               {Seminorm::NormalTrace, &snaps.flux, in.flux, &sys.A7}};
  for (const auto& s : semis) {
    const SparseMatrix K = seminorm_matrix(disc, s.which);
    for (int r : clamp_ladder(in.r_values, s.basis->rank)) {
      const IdentityCheck c = projection_identity(*s.Y, w, *s.basis, *s.W, K, r);
      rep.checks.push_back(make_check("seminorm_identity_" + to_string(s.which) + "_r" +
                                          std::to_string(r),
                                      c.lhs, c.rhs, kIdentityTol, c.discrepancy() <= kIdentityTol));
    }
  }

  {
    const int k = disc.basis.degree();
    const int d = disc.mesh.dim();
    const TraceInequalityResult t = check_trace_inequality(d, k, in.trace_samples, in.seed);
    rep.checks.push_back(make_check("trace_inequality_sharp_form", t.max_sharp_ratio, 1.0, 1e-10,
                                    t.max_sharp_ratio <= 1.0 + 1e-10));
    CheckEntry diam = make_check("trace_inequality_diameter_form", t.max_ratio, t.constant, 1e-10,
                                 t.max_ratio <= t.constant * (1.0 + 1e-10));
    diam.informational = true;
    rep.checks.push_back(diam);
  }

  const double c0 = sys.c_min();
  const double tau_star = sys.tau_min();
  for (int r : in.r_values) {
    const int r1 = std::min(r, in.flux->stored_modes());
    const int r2 = std::min(r, in.scalar->stored_modes());
    const int r3 = std::min(r, in.trace->stored_modes());
    if (r1 < 1 || r2 < 1 || r3 < 1) continue;
    const ReducedModel m = build_reduced(sys, *in.flux, *in.scalar, *in.trace, r1, r2, r3);
    const ReducedStructure st = reduced_structure(m);
    const std::string tag = "_r" + std::to_string(r);
    rep.checks.push_back(make_check("B1_lower_bound" + tag, st.b1_min_eig, c0, 1e-10,
                                    st.b1_min_eig >= c0 - 1e-10));
    rep.checks.push_back(make_check("B6_lower_bound" + tag, st.b6_min_eig, tau_star, 1e-10,
                                    st.b6_min_eig >= tau_star - 1e-10));
    rep.checks.push_back(make_check("reduced_operator_symmetry" + tag, st.asymmetry, 0.0, 1e-9,
                                    st.asymmetry <= 1e-9));
    rep.checks.push_back(make_check("reduced_operator_psd" + tag, st.sym_min_eig, 0.0, 1e-9,
                                    st.sym_min_eig >= -1e-9));
    if (in.zero_source) {
      const Eigen::VectorXd b0 = reduced_initial(m, sys, snaps.initial_scalar);
      const double T = snaps.times.back();
      const ReducedTrajectory traj = rom_run(m, in.dt, T, b0);
      double worst = 0.0;
      double prev = b0.norm();
      for (Eigen::Index n = 0; n < traj.scalar.cols(); ++n) {
        const double cur = traj.scalar.col(n).norm();
        worst = std::max(worst, cur - prev);
        prev = cur;
      }
      rep.checks.push_back(make_check("rom_energy_decay" + tag, worst, 0.0, 1e-12 * b0.norm(),
                                      worst <= 1e-12 * std::max(1.0, b0.norm())));
    }
  }

  if (in.zero_source) {
    double prev = sys.M.quadratic(snaps.initial_scalar);
    double worst = 0.0;
    for (int n = 0; n < snaps.size(); ++n) {
      const double cur = sys.M.quadratic(snaps.scalar.col(n));
      worst = std::max(worst, cur - prev);
      prev = cur;
    }
    const double e0 = sys.M.quadratic(snaps.initial_scalar);
    rep.checks.push_back(make_check("fom_energy_decay", worst, 0.0, 1e-12 * e0,
                                    worst <= 1e-12 * std::max(e0, 1e-300)));
  }
  return rep;
}

}  // namespace hdgpod
