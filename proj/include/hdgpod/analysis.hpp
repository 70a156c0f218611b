#pragma once

#include "hdgpod/assembly.hpp"
#include "hdgpod/fom.hpp"
#include "hdgpod/pod.hpp"
#include "hdgpod/rom.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdgpod {

enum class Seminorm {
  Gradient,      // |grad w|_Th, scalar space
  ElementTrace,  // |w|_dTh, scalar space
  Divergence,    // |div v|_Th, flux space
  NormalTrace,   // |v.n|_dTh, flux space
};

[[nodiscard]] bool acts_on_flux(Seminorm s);
[[nodiscard]] std::string to_string(Seminorm s);

/// Gram matrix K of a broken seminorm, so that |x|^2 = x^T K x.
SparseMatrix seminorm_matrix(const Discretization& disc, Seminorm which);

/// Broken seminorm of a flux (length N1) or scalar (length N2) coefficient vector.
double broken_seminorm(const Discretization& disc, const Eigen::VectorXd& coeffs, Seminorm which);

/// FOM-vs-ROM errors for one reduced order, mirroring the tabulated quantities.
struct ErrorReport {
  int r1 = 0, r2 = 0, r3 = 0;
  double q_error = 0.0;
  double u_error = 0.0;
  double tail_q = 0.0, tail_u = 0.0, tail_uhat = 0.0;
  double lambda_u = 0.0;  // Lambda_r^u
  double lambda_q = 0.0;  // Lambda_r^q
  double fom_seconds = 0.0;
  double rom_seconds = 0.0;
};

/// Accumulates (1/N sum_n |x_n - x_r,n|^2)^{1/2} for q in the A7 norm and u in the M norm.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const HdgSystem& system, const ReducedModel& model);
  void add(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, const Eigen::VectorXd& b);
  [[nodiscard]] double q_error() const;
  [[nodiscard]] double u_error() const;
  [[nodiscard]] int count() const { return count_; }

 private:
  const HdgSystem* system_;
  const ReducedModel* model_;
  double q_sum_ = 0.0;
  double u_sum_ = 0.0;
  int count_ = 0;
};

/// Errors between the FOM snapshots and a ROM trajectory on the same time grid.
ErrorReport trajectory_errors(const SnapshotSet& fom, const ReducedModel& model,
                              const ReducedTrajectory& rom, const HdgSystem& system);

/// The seminorm-weighted POD tails Lambda_r^u and Lambda_r^q of the error bound.
/// Requires all modes up to the rank to be stored.
void fill_lambda_terms(ErrorReport& report, const HdgSystem& system, const PodBasis& flux,
                       const PodBasis& scalar, const PodBasis& trace);

/// Worst observed ratio |v|_dK / (h_K^{-1/2} |v|_K) over random elements and
/// random v in P^k(K), together with the tested constants.
struct TraceInequalityResult {
  int dim = 0, k = 0, samples = 0;
  double constant = 0.0;        // sqrt((k+1)(k+2)/2) or sqrt((k+1)(k+3)/3)
  double max_ratio = 0.0;       // max |v|_dK h_K^{1/2} / |v|_K
  double max_sharp_ratio = 0.0; // max |v|_dK^2 / (c_sharp |dK|/|K| |v|_K^2), should be <= 1
};

/// Random affine simplices (rejecting near-degenerate ones) and random
/// coefficient vectors drawn from a seeded generator.
TraceInequalityResult check_trace_inequality(int dim, int k, int samples, std::uint64_t seed);

/// Explicit trace-inequality constant C(k, d).
double trace_constant(int dim, int k);

struct CheckEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool informational = false;
};

struct VerificationReport {
  std::vector<CheckEntry> checks;

  [[nodiscard]] bool all_passed() const;
  void write_text(std::ostream& os) const;
  void write_csv(std::ostream& os) const;
};

struct VerificationInput {
  const HdgSystem* system = nullptr;
  const SnapshotSet* snapshots = nullptr;
  const PodBasis* flux = nullptr;
  const PodBasis* scalar = nullptr;
  const PodBasis* trace = nullptr;
  double dt = 0.0;
  bool zero_source = true;
  std::vector<int> r_values;  // clamped to each rank; rank / 2 and rank are always added
  std::uint64_t seed = 1;
  int trace_samples = 200;
};

/// Runs the projection identities, orthonormality, trace-inequality,
/// reduced-operator and energy-decay checks and collects one entry per check.
VerificationReport verify_identities(const VerificationInput& input);

/// max |D^T W D - I|.
double orthonormality_defect(const PodBasis& basis, const BlockDiagonalMatrix& W);

/// Reduced-operator structure: min eig(B1) - c0, min eig(B6) - tau_min,
/// relative asymmetry of the reduced operator and the min eigenvalue of its symmetric part.
struct ReducedStructure {
  double b1_min_eig = 0.0;
  double b6_min_eig = 0.0;
  double asymmetry = 0.0;
  double sym_min_eig = 0.0;
};

ReducedStructure reduced_structure(const ReducedModel& model);

}  // namespace hdgpod
