#include "feec2d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace feec2d {

namespace {
// Local edge i is opposite local vertex i; endpoints listed low local
// index first.
constexpr int kEdgeVerts[3][2] = {{1, 2}, {0, 2}, {0, 1}};
// CCW traversal direction vs the local low->high direction above.
constexpr int kCcwVsLocal[3] = {+1, -1, +1};
}  // namespace

SimplicialMesh::SimplicialMesh(std::vector<Eigen::Vector2d> vertices,
                               std::vector<std::array<int, 3>> triangles,
                               int level)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), level_(level) {
  // orientation check
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    const Eigen::Vector2d a = vertices_[tri[0]];
    const Eigen::Vector2d ab = vertices_[tri[1]] - a;
    const Eigen::Vector2d ac = vertices_[tri[2]] - a;
    const double twice_area = ab.x() * ac.y() - ab.y() * ac.x();
    if (!(twice_area > 0.0))
      throw MeshError("triangle " + std::to_string(t) +
                      " is degenerate or not counterclockwise");
  }

  // global edges, lexicographically ordered pairs
  std::map<std::array<int, 2>, int> edge_id;
  for (const auto& tri : triangles_)
    for (const auto& lv : kEdgeVerts) {
      int a = tri[lv[0]], b = tri[lv[1]];
      edge_id.emplace(std::array<int, 2>{std::min(a, b), std::max(a, b)}, 0);
    }
  edges_.reserve(edge_id.size());
  for (auto& [e, id] : edge_id) {
    id = static_cast<int>(edges_.size());
    edges_.push_back(e);
  }

  tri_edges_.resize(triangles_.size());
  tri_edge_signs_.resize(triangles_.size());
  std::vector<int> edge_use(edges_.size(), 0);
  std::vector<int> edge_sign_sum(edges_.size(), 0);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int l = 0; l < 3; ++l) {
      int a = tri[kEdgeVerts[l][0]], b = tri[kEdgeVerts[l][1]];
      int e = edge_id.at({std::min(a, b), std::max(a, b)});
      tri_edges_[t][l] = e;
      int parity = a < b ? +1 : -1;
      tri_edge_signs_[t][l] = kCcwVsLocal[l] * parity;
      edge_use[e] += 1;
      edge_sign_sum[e] += tri_edge_signs_[t][l];
    }
  }

  edge_boundary_.resize(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_use[e] == 1) {
      edge_boundary_[e] = true;
      boundary_edges_.push_back(static_cast<int>(e));
    } else if (edge_use[e] == 2) {
      edge_boundary_[e] = false;
      if (edge_sign_sum[e] != 0)
        throw MeshError("interior edge " + std::to_string(e) +
                        " has inconsistent orientation");
    } else {
      throw MeshError("edge " + std::to_string(e) + " shared by " +
                      std::to_string(edge_use[e]) + " triangles");
    }
  }

  // Euler relation for a simply connected polygonal domain
  const long euler = static_cast<long>(vertices_.size()) -
                     static_cast<long>(edges_.size()) +
                     static_cast<long>(triangles_.size());
  if (euler != 1)
    throw MeshError("Euler relation V-E+F=1 violated (got " + std::to_string(euler) + ")");

  h_ = 0.0;
  for (const auto& e : edges_)
    h_ = std::max(h_, (vertices_[e[1]] - vertices_[e[0]]).norm());
}

SimplicialMesh SimplicialMesh::unit_square() {
  return SimplicialMesh({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}},
                        {{{0, 1, 2}}, {{0, 2, 3}}}, 0);
}

SimplicialMesh SimplicialMesh::single_triangle(const Eigen::Vector2d& a,
                                               const Eigen::Vector2d& b,
                                               const Eigen::Vector2d& c) {
  return SimplicialMesh({a, b, c}, {{{0, 1, 2}}}, 0);
}

SimplicialMesh SimplicialMesh::refine_uniform() const {
  std::vector<Eigen::Vector2d> verts = vertices_;
  verts.reserve(vertices_.size() + edges_.size());
  for (const auto& e : edges_) verts.push_back(0.5 * (vertices_[e[0]] + vertices_[e[1]]));

  const int nv = vertex_count();
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    const int a = tri[0], b = tri[1], c = tri[2];
    const int m0 = nv + tri_edges_[t][0];  // mid(b,c)
    const int m1 = nv + tri_edges_[t][1];  // mid(a,c)
    const int m2 = nv + tri_edges_[t][2];  // mid(a,b)
    tris.push_back({a, m2, m1});
    tris.push_back({m2, b, m0});
    tris.push_back({m1, m0, c});
    tris.push_back({m0, m1, m2});
  }
  return SimplicialMesh(std::move(verts), std::move(tris), level_ + 1);
}

std::array<int, 3> SimplicialMesh::triangle_edge_parities(int t) const {
  std::array<int, 3> p;
  for (int l = 0; l < 3; ++l) p[l] = kCcwVsLocal[l] * tri_edge_signs_[t][l];
  return p;
}

double SimplicialMesh::edge_length(int e) const {
  return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm();
}

Eigen::Vector2d SimplicialMesh::edge_normal(int e) const {
  Eigen::Vector2d d = vertices_[edges_[e][1]] - vertices_[edges_[e][0]];
  d /= d.norm();
  return {d.y(), -d.x()};
}

TriangleGeometry SimplicialMesh::triangle_geometry(int t) const {
  const auto& tri = triangles_[t];
  TriangleGeometry g;
  g.origin = vertices_[tri[0]];
  g.jacobian.col(0) = vertices_[tri[1]] - g.origin;
  g.jacobian.col(1) = vertices_[tri[2]] - g.origin;
  g.det = g.jacobian.determinant();
  g.area = 0.5 * g.det;
  if (!(g.area > 0.0))
    throw MeshError("triangle " + std::to_string(t) + " has non-positive area");
  for (int l = 0; l < 3; ++l) {
    const Eigen::Vector2d p = vertices_[tri[kEdgeVerts[l][0]]];
    const Eigen::Vector2d q = vertices_[tri[kEdgeVerts[l][1]]];
    g.edge_lengths[l] = (q - p).norm();
    // CCW traversal direction of local edge l, rotated by -90 deg
    Eigen::Vector2d d = (q - p) / g.edge_lengths[l] * double(kCcwVsLocal[l]);
    g.outward_normals[l] = {d.y(), -d.x()};
  }
  return g;
}

void SimplicialMesh::write_text(std::ostream& os) const {
  os << "# mesh level " << level_ << " h " << h_ << "\n";
  os << "# vertices " << vertex_count() << "\n";
  for (int v = 0; v < vertex_count(); ++v)
    os << "v " << v << " " << vertices_[v].x() << " " << vertices_[v].y() << "\n";
  os << "# edges " << edge_count() << " (boundary flag)\n";
  for (int e = 0; e < edge_count(); ++e)
    os << "e " << e << " " << edges_[e][0] << " " << edges_[e][1] << " "
       << (edge_boundary_[e] ? 1 : 0) << "\n";
  os << "# triangles " << triangle_count() << " (vertex ids, edge ids, incidence signs)\n";
  for (int t = 0; t < triangle_count(); ++t) {
    os << "t " << t;
    for (int i : triangles_[t]) os << " " << i;
    for (int e : tri_edges_[t]) os << " " << e;
    for (int s : tri_edge_signs_[t]) os << " " << s;
    os << "\n";
  }
}

}  // namespace feec2d
