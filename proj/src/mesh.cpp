#include "hdgpod/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hdgpod {

namespace {

using FaceKey = std::array<int, 3>;

FaceKey make_key(const std::vector<int>& verts) {
  FaceKey key{-1, -1, -1};
  std::copy(verts.begin(), verts.end(), key.begin());
  std::sort(key.begin(), key.begin() + static_cast<long>(verts.size()));
  return key;
}

struct FaceGeometry {
  Point normal;
  double measure;
};

// Unit normal of the face spanned by `pts`, oriented away from `opposite`.
FaceGeometry face_geometry(int dim, const std::vector<Point>& pts, const Point& opposite) {
  Point n;
  double measure;
  if (dim == 2) {
    const Point t = pts[1] - pts[0];
    n = Point(t.y(), -t.x(), 0.0);
    measure = t.norm();
  } else {
    n = (pts[1] - pts[0]).cross(pts[2] - pts[0]);
    measure = 0.5 * n.norm();
  }
  n.normalize();
  if (n.dot(opposite - pts[0]) > 0.0) n = -n;
  return {n, measure};
}

double factorial(int d) { return d == 2 ? 2.0 : 6.0; }

}  // namespace

SimplicialMesh::SimplicialMesh(int dim, std::vector<Point> vertices,
                               std::vector<std::vector<int>> elements)
    : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("mesh dimension must be 2 or 3");
  volumes_.resize(elements_.size());
  diameters_.resize(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    if (static_cast<int>(elements_[e].size()) != dim_ + 1)
      throw std::invalid_argument("element " + std::to_string(e) + " is not a simplex");
    const Eigen::MatrixXd J = jacobian(static_cast<int>(e));
    const double det = J.determinant();
    if (det <= 0.0)
      throw std::invalid_argument("element " + std::to_string(e) +
                                  " has non-positive orientation");
    volumes_[e] = det / factorial(dim_);
    double diam = 0.0;
    for (int a = 0; a <= dim_; ++a)
      for (int b = a + 1; b <= dim_; ++b)
        diam = std::max(diam, (vertices_[elements_[e][a]] - vertices_[elements_[e][b]]).norm());
    diameters_[e] = diam;
    h_ = std::max(h_, diam);
  }
  build_faces();
}

Eigen::MatrixXd SimplicialMesh::jacobian(int e) const {
  const auto& el = elements_[e];
  Eigen::MatrixXd J(dim_, dim_);
  for (int c = 0; c < dim_; ++c)
    J.col(c) = (vertices_[el[c + 1]] - vertices_[el[0]]).head(dim_);
  return J;
}

void SimplicialMesh::build_faces() {
  std::map<FaceKey, int> lookup;
  const int nf = dim_ + 1;
  element_faces_.assign(elements_.size() * nf, -1);
  for (int e = 0; e < num_elements(); ++e) {
    const auto& el = elements_[e];
    for (int i = 0; i < nf; ++i) {
      std::vector<int> fv;
      fv.reserve(dim_);
      for (int j = 0; j < nf; ++j)
        if (j != i) fv.push_back(el[j]);
      const FaceKey key = make_key(fv);
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(faces_.size()));
      if (inserted) {
        std::vector<Point> pts;
        for (int v : fv) pts.push_back(vertices_[v]);
        const FaceGeometry g = face_geometry(dim_, pts, vertices_[el[i]]);
        Face f;
        f.vertices = fv;
        f.left = e;
        f.left_local = i;
        f.normal = g.normal;
        f.measure = g.measure;
        faces_.push_back(std::move(f));
      } else {
        Face& f = faces_[it->second];
        if (f.right >= 0)
          throw std::invalid_argument("face shared by more than two elements");
        f.right = e;
        f.right_local = i;
      }
      element_faces_[static_cast<std::size_t>(e) * nf + i] = it->second;
    }
  }
  interior_index_.assign(faces_.size(), -1);
  for (int f = 0; f < num_faces(); ++f) {
    if (faces_[f].is_boundary()) {
      boundary_faces_.push_back(f);
    } else {
      interior_index_[f] = static_cast<int>(interior_faces_.size());
      interior_faces_.push_back(f);
    }
  }
}

Point SimplicialMesh::outward_normal(int e, int local) const {
  const Face& f = faces_[element_face(e, local)];
  return f.left == e ? f.normal : Point(-f.normal);
}

std::uint64_t SimplicialMesh::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  mix(&dim_, sizeof dim_);
  for (const Point& p : vertices_) mix(p.data(), sizeof(double) * 3);
  for (const auto& el : elements_) mix(el.data(), sizeof(int) * el.size());
  return h;
}

void SimplicialMesh::write(std::ostream& os) const {
  os << dim_ << ' ' << num_vertices() << ' ' << num_elements() << ' ' << num_faces() << '\n';
  os.precision(17);
  for (const Point& p : vertices_) {
    for (int c = 0; c < dim_; ++c) os << (c ? " " : "") << p[c];
    os << '\n';
  }
  for (const auto& el : elements_) {
    for (std::size_t i = 0; i < el.size(); ++i) os << (i ? " " : "") << el[i];
    os << '\n';
  }
  for (const Face& f : faces_) {
    for (int v : f.vertices) os << v << ' ';
    os << f.left << ' ' << f.right;
    for (int c = 0; c < dim_; ++c) os << ' ' << f.normal[c];
    os << '\n';
  }
}

SimplicialMesh build_structured_mesh(int dim, int n) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  if (n < 1) throw std::invalid_argument("subdivisions per axis must be >= 1");
  const double hx = 1.0 / n;
  std::vector<Point> verts;
  std::vector<std::vector<int>> elems;

  if (dim == 2) {
    auto grid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) verts.emplace_back(i * hx, j * hx, 0.0);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int c = static_cast<int>(verts.size());
        verts.emplace_back((i + 0.5) * hx, (j + 0.5) * hx, 0.0);
        const int v00 = grid(i, j), v10 = grid(i + 1, j);
        const int v11 = grid(i + 1, j + 1), v01 = grid(i, j + 1);
        elems.push_back({v00, v10, c});
        elems.push_back({v10, v11, c});
        elems.push_back({v11, v01, c});
        elems.push_back({v01, v00, c});
      }
    }
  } else {
    auto grid = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) verts.emplace_back(i * hx, j * hx, k * hx);
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          for (const auto& p : perms) {
            std::array<int, 3> idx{i, j, k};
            std::vector<int> tet{grid(idx[0], idx[1], idx[2])};
            for (int axis : p) {
              ++idx[axis];
              tet.push_back(grid(idx[0], idx[1], idx[2]));
            }
            const Eigen::Matrix3d J =
                (Eigen::Matrix3d() << (verts[tet[1]] - verts[tet[0]]),
                 (verts[tet[2]] - verts[tet[0]]), (verts[tet[3]] - verts[tet[0]]))
                    .finished();
            if (J.determinant() < 0.0) std::swap(tet[2], tet[3]);
            elems.push_back(std::move(tet));
          }
        }
      }
    }
  }
  return SimplicialMesh(dim, std::move(verts), std::move(elems));
}

FaceClassification classify_faces(const SimplicialMesh& mesh) {
  return {mesh.interior_faces(), mesh.boundary_faces()};
}

}  // namespace hdgpod
