#pragma once

#include "hdgpod/basis.hpp"
#include "hdgpod/block_diagonal.hpp"
#include "hdgpod/dof_layout.hpp"
#include "hdgpod/mesh.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace hdgpod {

using SpatialFunction = std::function<double(const Point&)>;

/// Mesh, reference basis and dof numbering of one HDG discretisation.
struct Discretization {
  SimplicialMesh mesh;
  ReferenceBasis basis;
  DofLayout layout;

  Discretization(SimplicialMesh m, int k);
};

std::shared_ptr<const Discretization> make_discretization(int dim, int n, int k);

/// Element-local HDG matrices. Trace columns run over the element's local
/// faces (face i occupies columns [i*nf, (i+1)*nf)); columns belonging to
/// boundary faces are zero and have trace_dofs entry -1.
struct ElementBlocks {
  Eigen::MatrixXd mass;          // (phi_j, phi_i)_K
  Eigen::MatrixXd flux_mass;     // (c phi_j, phi_i)_K, one flux component
  Eigen::MatrixXd divergence;    // rows (a, m): (phi_j, d_a phi_m)_K
  Eigen::MatrixXd trace_flux;    // rows (a, m): <psi_t, phi_m n_a>_dK
  Eigen::MatrixXd stabilization; // <tau phi_j, phi_i>_dK
  Eigen::MatrixXd trace_scalar;  // <tau psi_t, phi_i>_dK
  std::vector<int> trace_dofs;
};

/// All matrices of the semidiscrete HDG system
///
///   [0 0 0; 0 M 0; 0 0 0] x' + [A1 -A2 A3; A2^T A4 -A5; A3^T A5^T -A6] x = [0; b1; 0]
///
/// together with the unweighted flux mass A7 and the face-sum trace mass A8.
struct HdgSystem {
  std::shared_ptr<const Discretization> disc;
  std::vector<double> c;    // per element
  std::vector<double> tau;  // per face
  std::vector<ElementBlocks> local;

  BlockDiagonalMatrix A1, A4, A6, A7, A8, M;
  SparseMatrix A2, A3, A5;

  [[nodiscard]] const DofLayout& layout() const { return disc->layout; }
  [[nodiscard]] double c_min() const;
  [[nodiscard]] double tau_min() const;
};

/// Assembles the HDG matrices for per-element coefficient c = 1/a and
/// per-face stabilisation tau. Throws std::invalid_argument unless all
/// values are strictly positive.
HdgSystem assemble_hdg(std::shared_ptr<const Discretization> disc, std::vector<double> c,
                       std::vector<double> tau);

HdgSystem assemble_hdg(std::shared_ptr<const Discretization> disc, double c, double tau);

/// Reference coordinates in element e of the point with face coordinates eta on face f.
Eigen::VectorXd face_point_to_element(const SimplicialMesh& mesh, int f, int e,
                                      const Eigen::MatrixXd& Jinv,
                                      const Eigen::Ref<const Eigen::VectorXd>& eta);

/// Ratio (d-1)! |F| between physical and reference face measure.
double face_reference_scale(int dim, double measure);

/// Quadrature degree used for source and initial data.
int load_quadrature_degree(const ReferenceBasis& basis);

/// [(g, phi_i)_Th] for a smooth g; used for b1(t) and b2.
Eigen::VectorXd assemble_load(const Discretization& disc, const SpatialFunction& g);

}  // namespace hdgpod
