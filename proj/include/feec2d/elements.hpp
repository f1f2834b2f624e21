#ifndef FEEC2D_ELEMENTS_HPP
#define FEEC2D_ELEMENTS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "feec2d/mesh.hpp"

namespace feec2d {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

enum class Family { Full, Trimmed };

/// One Lambda^k_h choice: full (P_r) or trimmed (P_r^-) polynomial forms
/// of a given degree subscript, for k in {1, 2} (n = 2 throughout).
///
/// Admissible combinations and their classical names:
///   (Trimmed, r+1, 1) = RT_r          (Full, r+1, 1) = BDM_{r+1}
///   (Full, r, 2) = (Trimmed, r+1, 2) = DG_r
/// with degrees restricted to r in {0, 1}.
struct ElementFamily {
  Family family = Family::Trimmed;
  int degree = 1;      // subscript of P / P^-
  int form_order = 1;  // k: 1 = flux space, 2 = density space

  static ElementFamily raviart_thomas(int r) { return {Family::Trimmed, r + 1, 1}; }
  static ElementFamily brezzi_douglas_marini(int deg) { return {Family::Full, deg, 1}; }
  static ElementFamily discontinuous(int r) { return {Family::Full, r, 2}; }

  bool admissible() const;
  /// Highest polynomial degree of shape functions.
  int shape_degree() const;
  /// The r of the DG_r space that div maps onto (flux spaces only).
  int div_target_degree() const;
  std::string name() const;  // "RT0", "BDM1", "RT1", "DG0", "DG1"
  bool operator==(const ElementFamily&) const = default;
};

/// dim P_degree Lambda^k (family Full) or P^-_degree Lambda^k (Trimmed)
/// on a single triangle, n = 2.
int simplex_dim(Family family, int degree, int form_order);

/// What a degree of freedom is, for reporting and tests.
struct DofFunctional {
  enum class Kind { EdgeMoment, InteriorMoment, CellMoment };
  Kind kind;
  int entity;  // global edge or triangle index
  int moment;  // Legendre order for edge moments; component / monomial index otherwise
};

/// Physical basis values on one triangle.  Flux spaces (k=1) fill
/// `vec_values` (rows = local dofs) and `divs`; density spaces (k=2)
/// fill `scalar_values` and leave divs zero (d of an n-form vanishes).
struct BasisEval {
  Eigen::Matrix<double, Eigen::Dynamic, 2> vec_values;
  Eigen::VectorXd divs;
  Eigen::VectorXd scalar_values;
};

/// A concrete Lambda^k_h on a mesh: global dof enumeration, dof signs,
/// and Piola-mapped basis evaluation.
///
/// Dof layout: flux spaces enumerate edge moments as (moments-per-edge)
/// blocks in global edge order, then interior moments in triangle order;
/// density spaces enumerate cell moments in triangle order.
///
/// Immutable after construction; evaluation is pure and safe to call
/// concurrently.
class FESpace {
 public:
  FESpace(const SimplicialMesh& mesh, ElementFamily element);

  const SimplicialMesh& mesh() const { return *mesh_; }
  ElementFamily element() const { return element_; }
  int form_order() const { return element_.form_order; }
  int dof_count() const { return dof_count_; }
  int local_dof_count() const;

  struct DofRef {
    int global;
    double sign;
  };
  DofRef local_to_global(int tri, int local) const;
  DofFunctional dof_functional(int global) const;

  /// Physical basis values at a reference point of triangle `tri`.
  /// Throws std::domain_error if the point is outside the closed
  /// reference triangle.
  void eval_basis(int tri, const Eigen::Vector2d& ref, BasisEval& out) const;

  /// Coefficient-field evaluation helpers (reference point of `tri`).
  Eigen::Vector2d eval_vector(int tri, const Eigen::Vector2d& ref,
                              const Eigen::VectorXd& coeffs) const;
  double eval_div(int tri, const Eigen::Vector2d& ref, const Eigen::VectorXd& coeffs) const;
  double eval_scalar(int tri, const Eigen::Vector2d& ref, const Eigen::VectorXd& coeffs) const;

  /// Reference-element data shared by all triangles: values of the local
  /// shape functions at a fixed reference point.  Used by assembly loops
  /// to avoid re-evaluating polynomials per triangle; `eval_basis` applies
  /// the Piola map and dof signs on top of these.
  void eval_reference(const Eigen::Vector2d& ref,
                      Eigen::Matrix<double, Eigen::Dynamic, 2>& values,
                      Eigen::VectorXd& divs) const;  // k=1
  void eval_reference_scalar(const Eigen::Vector2d& ref, Eigen::VectorXd& values) const;  // k=2

 private:
  const SimplicialMesh* mesh_;
  ElementFamily element_;
  int dof_count_ = 0;
  int moments_per_edge_ = 0;   // k=1
  int interior_per_tri_ = 0;   // k=1 (RT1) or k=2 cell moments
};

/// Canonical (degree-of-freedom) interpolation: edge flux moments against
/// Legendre weights in the global edge parametrization, pulled-back interior
/// moments, and local L2 moments for density spaces.  Idempotent on members
/// of the space and commutes with div across compatible pairs.
Eigen::VectorXd canonical_interpolation(const FESpace& space, const VectorField& w);
Eigen::VectorXd canonical_interpolation(const FESpace& space, const ScalarField& w);

/// Global L2-orthogonal projection (solves with the space's mass matrix).
Eigen::VectorXd l2_projection(const FESpace& space, const VectorField& w);
Eigen::VectorXd l2_projection(const FESpace& space, const ScalarField& w);

}  // namespace feec2d

#endif
