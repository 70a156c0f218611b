#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hdgpod {

using Point = Eigen::Vector3d;  // z is unused in 2D

/// A mesh face shared by one (boundary) or two (interior) elements.
///
/// `normal` is the unit normal pointing out of `left`. The vertex order is the
/// canonical parametrization used for trace basis functions on this face, so
/// both neighbours see the same face coordinates.
struct Face {
  std::vector<int> vertices;
  int left = -1;
  int left_local = -1;
  int right = -1;  // -1 on the boundary
  int right_local = -1;
  Point normal = Point::Zero();
  double measure = 0.0;

  [[nodiscard]] bool is_boundary() const { return right < 0; }
};

/// Structured simplicial mesh of the unit square or cube.
///
/// Local face i of an element is the face opposite its local vertex i.
class SimplicialMesh {
 public:
  SimplicialMesh(int dim, std::vector<Point> vertices,
                 std::vector<std::vector<int>> elements);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_elements() const { return static_cast<int>(elements_.size()); }
  [[nodiscard]] int num_faces() const { return static_cast<int>(faces_.size()); }
  [[nodiscard]] int faces_per_element() const { return dim_ + 1; }

  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<int>& element(int e) const { return elements_[e]; }
  [[nodiscard]] const std::vector<std::vector<int>>& elements() const { return elements_; }
  [[nodiscard]] const Face& face(int f) const { return faces_[f]; }
  [[nodiscard]] const std::vector<Face>& faces() const { return faces_; }

  /// Global face id of local face `local` of element `e`.
  [[nodiscard]] int element_face(int e, int local) const {
    return element_faces_[static_cast<std::size_t>(e) * (dim_ + 1) + local];
  }
  /// Outward unit normal of local face `local` of element `e`.
  [[nodiscard]] Point outward_normal(int e, int local) const;

  /// Affine map x = x0 + J xi from the reference simplex.
  [[nodiscard]] Eigen::MatrixXd jacobian(int e) const;
  [[nodiscard]] double volume(int e) const { return volumes_[e]; }
  [[nodiscard]] double diameter(int e) const { return diameters_[e]; }
  [[nodiscard]] double h() const { return h_; }

  [[nodiscard]] const std::vector<int>& interior_faces() const { return interior_faces_; }
  [[nodiscard]] const std::vector<int>& boundary_faces() const { return boundary_faces_; }
  /// Position of face f in interior_faces(), or -1 for boundary faces.
  [[nodiscard]] int interior_index(int f) const { return interior_index_[f]; }

  /// Stable FNV-1a hash of vertex coordinates and connectivity.
  [[nodiscard]] std::uint64_t hash() const;

  /// Plain-text dump: header `dim n_vertices n_elements n_faces`, then
  /// vertices, element connectivity (0-based) and face records.
  void write(std::ostream& os) const;

 private:
  void build_faces();

  int dim_;
  std::vector<Point> vertices_;
  std::vector<std::vector<int>> elements_;
  std::vector<Face> faces_;
  std::vector<int> element_faces_;
  std::vector<double> volumes_;
  std::vector<double> diameters_;
  double h_ = 0.0;
  std::vector<int> interior_faces_;
  std::vector<int> boundary_faces_;
  std::vector<int> interior_index_;
};

/// n x n squares split into 4 triangles through the centre (2D), or n^3 cubes
/// split into 6 Kuhn tetrahedra (3D).
SimplicialMesh build_structured_mesh(int dim, int n);

struct FaceClassification {
  std::vector<int> interior;
  std::vector<int> boundary;
};

FaceClassification classify_faces(const SimplicialMesh& mesh);

}  // namespace hdgpod
