#include "doctest.h"

#include "hdgpod/mesh.hpp"

#include <numeric>
#include <sstream>

using namespace hdgpod;

namespace {

double total_volume(const SimplicialMesh& m) {
  double v = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) v += m.volume(e);
  return v;
}

double boundary_measure(const SimplicialMesh& m) {
  double s = 0.0;
  for (int f : m.boundary_faces()) s += m.face(f).measure;
  return s;
}

}  // namespace

TEST_CASE("2D union-jack counts") {
  const SimplicialMesh m1 = build_structured_mesh(2, 1);
  CHECK(m1.num_elements() == 4);
  CHECK(m1.num_vertices() == 5);
  CHECK(m1.boundary_faces().size() == 4);
  CHECK(m1.interior_faces().size() == 4);

  const SimplicialMesh m = build_structured_mesh(2, 32);
  CHECK(m.num_elements() == 4096);
  CHECK(m.boundary_faces().size() == 128);
  CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(boundary_measure(m) == doctest::Approx(4.0).epsilon(1e-13));
  // Each triangle has 3 faces, interior faces are shared.
  CHECK(3 * m.num_elements() == 2 * static_cast<int>(m.interior_faces().size()) +
                                    static_cast<int>(m.boundary_faces().size()));
}

TEST_CASE("3D Kuhn counts") {
  const SimplicialMesh m1 = build_structured_mesh(3, 1);
  CHECK(m1.num_elements() == 6);
  CHECK(m1.boundary_faces().size() == 12);
  CHECK(total_volume(m1) == doctest::Approx(1.0).epsilon(1e-13));

  const SimplicialMesh m = build_structured_mesh(3, 16);
  CHECK(m.num_elements() == 24576);
  CHECK(m.boundary_faces().size() == 6u * 2 * 16 * 16);
  CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boundary_measure(m) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("elements are positively oriented and normals are consistent") {
  for (int dim : {2, 3}) {
    const SimplicialMesh m = build_structured_mesh(dim, 3);
    for (int e = 0; e < m.num_elements(); ++e) {
      CHECK(m.jacobian(e).determinant() > 0.0);
      // Outward normals weighted by face measure sum to zero on a closed simplex.
      Point s = Point::Zero();
      for (int i = 0; i <= dim; ++i) s += m.face(m.element_face(e, i)).measure * m.outward_normal(e, i);
      CHECK(s.norm() < 1e-13);
      // Local face i is opposite local vertex i: the normal points away from that vertex.
      for (int i = 0; i <= dim; ++i) {
        const Face& f = m.face(m.element_face(e, i));
        const Point to_vertex = m.vertices()[m.element(e)[i]] - m.vertices()[f.vertices[0]];
        CHECK(m.outward_normal(e, i).dot(to_vertex) < 0.0);
      }
    }
    for (int f : m.interior_faces()) {
      const Face& face = m.face(f);
      CHECK(face.right >= 0);
      const Point nl = m.outward_normal(face.left, face.left_local);
      const Point nr = m.outward_normal(face.right, face.right_local);
      CHECK((nl + nr).norm() < 1e-14);
      CHECK(m.interior_index(f) >= 0);
    }
    for (int f : m.boundary_faces()) CHECK(m.interior_index(f) == -1);
  }
}

TEST_CASE("diameter and h") {
  const SimplicialMesh m = build_structured_mesh(2, 4);
  // Union-jack triangles: two half-diagonals and one cell side; the longest edge is the side.
  CHECK(m.h() == doctest::Approx(0.25));
  const SimplicialMesh k = build_structured_mesh(3, 2);
  CHECK(k.h() == doctest::Approx(std::sqrt(3.0) / 2));
}

TEST_CASE("hash is stable and distinguishes meshes") {
  CHECK(build_structured_mesh(2, 4).hash() == build_structured_mesh(2, 4).hash());
  CHECK(build_structured_mesh(2, 4).hash() != build_structured_mesh(2, 5).hash());
  CHECK(build_structured_mesh(2, 1).hash() != build_structured_mesh(3, 1).hash());
}

TEST_CASE("classification agrees with the mesh") {
  const SimplicialMesh m = build_structured_mesh(3, 2);
  const FaceClassification c = classify_faces(m);
  CHECK(c.interior == m.interior_faces());
  CHECK(c.boundary == m.boundary_faces());
}

TEST_CASE("text dump header") {
  const SimplicialMesh m = build_structured_mesh(2, 1);
  std::ostringstream os;
  m.write(os);
  std::istringstream is(os.str());
  int dim, nv, ne, nf;
  is >> dim >> nv >> ne >> nf;
  CHECK(dim == 2);
  CHECK(nv == 5);
  CHECK(ne == 4);
  CHECK(nf == 8);
}

TEST_CASE("invalid input is rejected") {
  CHECK_THROWS(build_structured_mesh(1, 4));
  CHECK_THROWS(build_structured_mesh(2, 0));
  // Clockwise triangle.
  std::vector<Point> v = {Point(0, 0, 0), Point(0, 1, 0), Point(1, 0, 0)};
  CHECK_THROWS(SimplicialMesh(2, v, {{0, 1, 2}}));
}
