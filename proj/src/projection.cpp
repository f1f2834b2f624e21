#include <Eigen/SparseCholesky>

#include "feec2d/assembly.hpp"
#include "feec2d/elements.hpp"
#include "feec2d/quadrature.hpp"

namespace feec2d {

namespace {

Eigen::VectorXd mass_solve(const FESpace& space, const Eigen::VectorXd& rhs) {
  const SpMat mass = assemble_mass(space);
  Eigen::SimplicialLLT<SpMat> llt(mass);
  if (llt.info() != Eigen::Success)
    throw SolverError("l2_projection: mass matrix factorization failed for " +
                      space.element().name() + " (assembly defect, mass must be SPD)");
  Eigen::VectorXd x = llt.solve(rhs);
  const double res = (mass * x - rhs).norm();
  const double scale = rhs.norm() > 0.0 ? rhs.norm() : 1.0;
  if (!(res <= 1e-12 * scale))
    throw SolverError("l2_projection: mass solve residual " + std::to_string(res));
  return x;
}

}  // namespace

Eigen::VectorXd l2_projection(const FESpace& space, const VectorField& w) {
  if (space.form_order() != 1) throw ConfigError("l2_projection: expected a flux space");
  const SimplicialMesh& mesh = space.mesh();
  const TriangleRule& rule = triangle_rule(10);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.dof_count());
  BasisEval b;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = mesh.triangle_geometry(t);
    for (const auto& q : rule.points) {
      space.eval_basis(t, {q.x, q.y}, b);
      const Eigen::Vector2d wx = w(g.to_physical({q.x, q.y}));
      for (int j = 0; j < space.local_dof_count(); ++j)
        rhs[space.local_to_global(t, j).global] +=
            q.w * g.det * b.vec_values.row(j).dot(wx);
    }
  }
  return mass_solve(space, rhs);
}

Eigen::VectorXd l2_projection(const FESpace& space, const ScalarField& w) {
  if (space.form_order() != 2) throw ConfigError("l2_projection: expected a density space");
  const SimplicialMesh& mesh = space.mesh();
  const TriangleRule& rule = triangle_rule(10);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.dof_count());
  Eigen::VectorXd vals;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = mesh.triangle_geometry(t);
    for (const auto& q : rule.points) {
      space.eval_reference_scalar({q.x, q.y}, vals);
      const double wx = w(g.to_physical({q.x, q.y}));
      for (int j = 0; j < space.local_dof_count(); ++j)
        rhs[space.local_to_global(t, j).global] += q.w * g.det * vals(j) * wx;
    }
  }
  return mass_solve(space, rhs);
}

}  // namespace feec2d
