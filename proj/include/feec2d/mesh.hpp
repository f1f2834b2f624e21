#ifndef FEEC2D_MESH_HPP
#define FEEC2D_MESH_HPP

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <vector>

#include "feec2d/errors.hpp"

namespace feec2d {

/// Affine map data of one triangle: x = origin + J * x_ref with the
/// reference triangle {(0,0),(1,0),(0,1)}.  det > 0 for CCW triangles.
struct TriangleGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  double det = 0.0;
  double area = 0.0;
  std::array<double, 3> edge_lengths{};            // local edge i opposite vertex i
  std::array<Eigen::Vector2d, 3> outward_normals{};

  Eigen::Vector2d to_physical(const Eigen::Vector2d& ref) const {
    return origin + jacobian * ref;
  }
  Eigen::Vector2d to_reference(const Eigen::Vector2d& phys) const {
    return jacobian.inverse() * (phys - origin);
  }
};

/// Oriented triangulation of a polygonal domain.
///
/// Conventions:
///  - triangles are stored counterclockwise (positive signed area);
///  - local edge i of a triangle is the edge opposite local vertex i;
///  - global edges are vertex pairs ordered low index -> high index;
///  - the incidence sign of (triangle, local edge) is +1 when the
///    triangle's induced CCW traversal of that edge runs low -> high.
///
/// Instances are immutable after construction and safe to share across
/// threads; refinement returns a new mesh.
class SimplicialMesh {
 public:
  SimplicialMesh(std::vector<Eigen::Vector2d> vertices,
                 std::vector<std::array<int, 3>> triangles, int level = 0);

  /// Two-triangle split of (0,1)^2 along the diagonal (0,0)-(1,1).
  static SimplicialMesh unit_square();
  /// One-triangle mesh, handy for element-level checks.
  static SimplicialMesh single_triangle(const Eigen::Vector2d& a,
                                        const Eigen::Vector2d& b,
                                        const Eigen::Vector2d& c);

  /// Uniform red refinement: each triangle split into 4 congruent children
  /// through edge midpoints.  Halves h exactly and increments the level.
  SimplicialMesh refine_uniform() const;

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int level() const { return level_; }
  double h() const { return h_; }

  const Eigen::Vector2d& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }

  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
  /// Incidence signs: CCW-induced orientation vs global (low->high).
  const std::array<int, 3>& triangle_edge_signs(int t) const { return tri_edge_signs_[t]; }
  /// Vertex-order parity: +1 when the local (low local index -> high) edge
  /// direction agrees with the global low->high direction.  This is the
  /// sign relevant for H(div) degrees of freedom.
  std::array<int, 3> triangle_edge_parities(int t) const;

  bool boundary_edge(int e) const { return edge_boundary_[e]; }
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }
  double edge_length(int e) const;
  /// Unit normal of a global edge: low->high direction rotated by -90 deg.
  Eigen::Vector2d edge_normal(int e) const;

  TriangleGeometry triangle_geometry(int t) const;

  /// Plain-text dump (entity lists with indices and coordinates).
  void write_text(std::ostream& os) const;

 private:
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 3>> tri_edge_signs_;
  std::vector<bool> edge_boundary_;
  std::vector<int> boundary_edges_;
  int level_ = 0;
  double h_ = 0.0;
};

}  // namespace feec2d

#endif
