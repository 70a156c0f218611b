#pragma once

#include "hdgpod/basis.hpp"
#include "hdgpod/mesh.hpp"

namespace hdgpod {

/// Global numbering of the flux, scalar and trace unknowns.
///
/// Scalar dof (element e, local i) -> e * ns + i. Flux dofs are numbered
/// component-major, (component a, element e, local i) -> a * N2 + e * ns + i, so
/// the divergence coupling splits into d stacked element-block-diagonal pieces.
/// Trace dofs live on interior faces only: (interior face j, local t) -> j * nf + t.
struct DofLayout {
  int dim = 0;
  int num_elements = 0;
  int scalar_per_element = 0;
  int trace_per_face = 0;
  int num_interior_faces = 0;

  [[nodiscard]] int n1() const { return dim * n2(); }
  [[nodiscard]] int n2() const { return scalar_per_element * num_elements; }
  [[nodiscard]] int n3() const { return trace_per_face * num_interior_faces; }

  [[nodiscard]] int scalar(int e, int i) const { return e * scalar_per_element + i; }
  [[nodiscard]] int flux(int component, int e, int i) const {
    return component * n2() + scalar(e, i);
  }
  [[nodiscard]] int trace(int interior_face, int t) const {
    return interior_face * trace_per_face + t;
  }
};

DofLayout build_dof_layout(const SimplicialMesh& mesh, const ReferenceBasis& basis);

}  // namespace hdgpod
