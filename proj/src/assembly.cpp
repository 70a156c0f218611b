#include "hdgpod/assembly.hpp"

#include "hdgpod/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hdgpod {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

ElementBlocks element_blocks(const Discretization& disc, int e, double c,
                             const std::vector<double>& tau) {
  const SimplicialMesh& mesh = disc.mesh;
  const ReferenceBasis& basis = disc.basis;
  const int d = mesh.dim();
  const int ns = basis.num_scalar();
  const int nf = basis.num_face();
  const int nfaces = d + 1;

  const Eigen::MatrixXd J = mesh.jacobian(e);
  const Eigen::MatrixXd Jinv = J.inverse();
  const double detJ = J.determinant();

  ElementBlocks blk;
  blk.mass = Eigen::MatrixXd::Zero(ns, ns);
  blk.divergence = Eigen::MatrixXd::Zero(d * ns, ns);
  blk.trace_flux = Eigen::MatrixXd::Zero(d * ns, nfaces * nf);
  blk.stabilization = Eigen::MatrixXd::Zero(ns, ns);
  blk.trace_scalar = Eigen::MatrixXd::Zero(ns, nfaces * nf);
  blk.trace_dofs.assign(nfaces * nf, -1);

  const QuadratureRule& rule = basis.element_quadrature();
  for (int q = 0; q < rule.size(); ++q) {
    const double w = rule.weights[q] * detJ;
    const auto phi = basis.element_table().col(q);
    const Eigen::MatrixXd grad = basis.gradient_table()[q] * Jinv;  // ns x d, physical
    blk.mass.noalias() += w * phi * phi.transpose();
    for (int a = 0; a < d; ++a)
      blk.divergence.middleRows(a * ns, ns).noalias() += w * grad.col(a) * phi.transpose();
  }
  blk.flux_mass = c * blk.mass;

  const QuadratureRule& frule = basis.face_quadrature();
  for (int i = 0; i < nfaces; ++i) {
    const int f = mesh.element_face(e, i);
    const Face& face = mesh.face(f);
    const Point n = mesh.outward_normal(e, i);
    const double scale = face_reference_scale(d, face.measure);
    const double t = tau[f];
    const int jf = mesh.interior_index(f);
    if (jf >= 0)
      for (int s = 0; s < nf; ++s) blk.trace_dofs[i * nf + s] = disc.layout.trace(jf, s);
    for (int q = 0; q < frule.size(); ++q) {
      const double w = frule.weights[q] * scale;
      const Eigen::VectorXd xi = face_point_to_element(mesh, f, e, Jinv, frule.points.col(q));
      const Eigen::VectorXd phi = basis.scalar_values(xi);
      blk.stabilization.noalias() += (t * w) * phi * phi.transpose();
      if (jf < 0) continue;
      const auto psi = basis.face_table().col(q);
      for (int a = 0; a < d; ++a)
        blk.trace_flux.block(a * ns, i * nf, ns, nf).noalias() +=
            (w * n[a]) * phi * psi.transpose();
      blk.trace_scalar.middleCols(i * nf, nf).noalias() += (t * w) * phi * psi.transpose();
    }
  }
  return blk;
}

Eigen::MatrixXd face_mass(const Discretization& disc, int f) {
  const ReferenceBasis& basis = disc.basis;
  const QuadratureRule& frule = basis.face_quadrature();
  const double scale = face_reference_scale(disc.mesh.dim(), disc.mesh.face(f).measure);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis.num_face(), basis.num_face());
  for (int q = 0; q < frule.size(); ++q) {
    const auto psi = basis.face_table().col(q);
    m.noalias() += (frule.weights[q] * scale) * psi * psi.transpose();
  }
  return m;
}

}  // namespace

Eigen::VectorXd face_point_to_element(const SimplicialMesh& mesh, int f, int e,
                                      const Eigen::MatrixXd& Jinv,
                                      const Eigen::Ref<const Eigen::VectorXd>& eta) {
  const auto& V = mesh.vertices();
  const Face& face = mesh.face(f);
  Point x = V[face.vertices[0]];
  for (int j = 0; j < eta.size(); ++j) x += eta[j] * (V[face.vertices[j + 1]] - V[face.vertices[0]]);
  const Point rel = x - V[mesh.element(e)[0]];
  return Jinv * rel.head(mesh.dim());
}

double face_reference_scale(int dim, double measure) {
  return dim == 2 ? measure : 2.0 * measure;
}

Discretization::Discretization(SimplicialMesh m, int k)
    : mesh(std::move(m)), basis(mesh.dim(), k), layout(build_dof_layout(mesh, basis)) {}

std::shared_ptr<const Discretization> make_discretization(int dim, int n, int k) {
  return std::make_shared<const Discretization>(build_structured_mesh(dim, n), k);
}

double HdgSystem::c_min() const { return *std::min_element(c.begin(), c.end()); }

double HdgSystem::tau_min() const { return *std::min_element(tau.begin(), tau.end()); }

HdgSystem assemble_hdg(std::shared_ptr<const Discretization> disc, std::vector<double> c,
                       std::vector<double> tau) {
  if (!disc) throw std::invalid_argument("assemble_hdg: null discretization");
  const SimplicialMesh& mesh = disc->mesh;
  const DofLayout& L = disc->layout;
  if (static_cast<int>(c.size()) != mesh.num_elements())
    throw std::invalid_argument("coefficient c needs one value per element");
  if (static_cast<int>(tau.size()) != mesh.num_faces())
    throw std::invalid_argument("stabilization tau needs one value per face");
  for (double v : c)
    if (!(v > 0.0)) throw std::invalid_argument("coefficient c must be positive");
  for (double v : tau)
    if (!(v > 0.0)) throw std::invalid_argument("stabilization tau must be positive");

  HdgSystem sys;
  sys.disc = disc;
  sys.c = std::move(c);
  sys.tau = std::move(tau);
  sys.local.resize(mesh.num_elements());
  parallel_for(mesh.num_elements(), [&](int e) {
    sys.local[e] = element_blocks(*disc, e, sys.c[e], sys.tau);
  });

  const int d = L.dim;
  const int ns = L.scalar_per_element;
  const int E = L.num_elements;
  std::vector<Eigen::MatrixXd> m_blocks(E), a4_blocks(E);
  std::vector<Eigen::MatrixXd> a1_blocks(static_cast<std::size_t>(d) * E);
  std::vector<Eigen::MatrixXd> a7_blocks(static_cast<std::size_t>(d) * E);
  Triplets t2, t3, t5;
  for (int e = 0; e < E; ++e) {
    const ElementBlocks& b = sys.local[e];
    m_blocks[e] = b.mass;
    a4_blocks[e] = b.stabilization;
    for (int a = 0; a < d; ++a) {
      a1_blocks[static_cast<std::size_t>(a) * E + e] = b.flux_mass;
      a7_blocks[static_cast<std::size_t>(a) * E + e] = b.mass;
      for (int m = 0; m < ns; ++m) {
        const int row = L.flux(a, e, m);
        for (int j = 0; j < ns; ++j)
          t2.emplace_back(row, L.scalar(e, j), b.divergence(a * ns + m, j));
        for (std::size_t t = 0; t < b.trace_dofs.size(); ++t)
          if (b.trace_dofs[t] >= 0)
            t3.emplace_back(row, b.trace_dofs[t], b.trace_flux(a * ns + m, static_cast<long>(t)));
      }
    }
    for (int i = 0; i < ns; ++i)
      for (std::size_t t = 0; t < b.trace_dofs.size(); ++t)
        if (b.trace_dofs[t] >= 0)
          t5.emplace_back(L.scalar(e, i), b.trace_dofs[t], b.trace_scalar(i, static_cast<long>(t)));
  }
  sys.M = BlockDiagonalMatrix(std::move(m_blocks));
  sys.A4 = BlockDiagonalMatrix(std::move(a4_blocks));
  sys.A1 = BlockDiagonalMatrix(std::move(a1_blocks));
  sys.A7 = BlockDiagonalMatrix(std::move(a7_blocks));
  sys.A2.resize(L.n1(), L.n2());
  sys.A2.setFromTriplets(t2.begin(), t2.end());
  sys.A3.resize(L.n1(), L.n3());
  sys.A3.setFromTriplets(t3.begin(), t3.end());
  sys.A5.resize(L.n2(), L.n3());
  sys.A5.setFromTriplets(t5.begin(), t5.end());

  // Interior faces are seen from both neighbours in the dK sums.
  std::vector<Eigen::MatrixXd> a6_blocks, a8_blocks;
  a6_blocks.reserve(mesh.interior_faces().size());
  a8_blocks.reserve(mesh.interior_faces().size());
  for (int f : mesh.interior_faces()) {
    const Eigen::MatrixXd mf = face_mass(*disc, f);
    a8_blocks.push_back(2.0 * mf);
    a6_blocks.push_back((2.0 * sys.tau[f]) * mf);
  }
  sys.A6 = BlockDiagonalMatrix(std::move(a6_blocks));
  sys.A8 = BlockDiagonalMatrix(std::move(a8_blocks));
  return sys;
}

HdgSystem assemble_hdg(std::shared_ptr<const Discretization> disc, double c, double tau) {
  if (!disc) throw std::invalid_argument("assemble_hdg: null discretization");
  const int E = disc->mesh.num_elements();
  const int F = disc->mesh.num_faces();
  return assemble_hdg(std::move(disc), std::vector<double>(E, c), std::vector<double>(F, tau));
}

int load_quadrature_degree(const ReferenceBasis& basis) { return 2 * basis.degree() + 8; }

Eigen::VectorXd assemble_load(const Discretization& disc, const SpatialFunction& g) {
  const SimplicialMesh& mesh = disc.mesh;
  const ReferenceBasis& basis = disc.basis;
  const int ns = basis.num_scalar();
  const int d = mesh.dim();
  const QuadratureRule rule = simplex_quadrature(d, load_quadrature_degree(basis));
  Eigen::MatrixXd phi(ns, rule.size());
  for (int q = 0; q < rule.size(); ++q) phi.col(q) = basis.scalar_values(rule.points.col(q));

  Eigen::VectorXd b(disc.layout.n2());
  parallel_for(mesh.num_elements(), [&](int e) {
    const Eigen::MatrixXd J = mesh.jacobian(e);
    const double detJ = J.determinant();
    const Point& x0 = mesh.vertices()[mesh.element(e)[0]];
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(ns);
    for (int q = 0; q < rule.size(); ++q) {
      Point x = x0;
      x.head(d) += J * rule.points.col(q);
      acc += (rule.weights[q] * detJ * g(x)) * phi.col(q);
    }
    b.segment(static_cast<long>(e) * ns, ns) = acc;
  });
  return b;
}

}  // namespace hdgpod
