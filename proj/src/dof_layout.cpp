#include "hdgpod/dof_layout.hpp"

#include <stdexcept>

namespace hdgpod {

DofLayout build_dof_layout(const SimplicialMesh& mesh, const ReferenceBasis& basis) {
  if (mesh.dim() != basis.dim())
    throw std::invalid_argument("mesh and basis dimensions differ");
  DofLayout layout;
  layout.dim = mesh.dim();
  layout.num_elements = mesh.num_elements();
  layout.scalar_per_element = basis.num_scalar();
  layout.trace_per_face = basis.num_face();
  layout.num_interior_faces = static_cast<int>(mesh.interior_faces().size());
  return layout;
}

}  // namespace hdgpod
