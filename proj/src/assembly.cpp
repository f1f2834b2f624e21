#include "feec2d/assembly.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "feec2d/quadrature.hpp"

namespace feec2d {

namespace {

// Reference shape values pre-tabulated at the rule points; the per-triangle
// work is then only the Piola scaling.
struct FluxTab {
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>> vals;
  std::vector<Eigen::VectorXd> divs;
};

FluxTab tabulate_flux(const FESpace& s, const TriangleRule& rule) {
  FluxTab t;
  t.vals.resize(rule.points.size());
  t.divs.resize(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    s.eval_reference({rule.points[q].x, rule.points[q].y}, t.vals[q], t.divs[q]);
  return t;
}

std::vector<Eigen::VectorXd> tabulate_density(const FESpace& s, const TriangleRule& rule) {
  std::vector<Eigen::VectorXd> t(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    s.eval_reference_scalar({rule.points[q].x, rule.points[q].y}, t[q]);
  return t;
}

void scatter(std::vector<Eigen::Triplet<double>>& trips, const FESpace& row_sp,
             const FESpace& col_sp, int tri, const Eigen::MatrixXd& local) {
  for (int i = 0; i < row_sp.local_dof_count(); ++i) {
    const auto ri = row_sp.local_to_global(tri, i);
    for (int j = 0; j < col_sp.local_dof_count(); ++j) {
      const auto cj = col_sp.local_to_global(tri, j);
      trips.emplace_back(ri.global, cj.global, ri.sign * cj.sign * local(i, j));
    }
  }
}

}  // namespace

SpMat assemble_mass(const FESpace& space) {
  const SimplicialMesh& mesh = space.mesh();
  const int deg = 2 * space.element().shape_degree() + 2;
  const TriangleRule& rule = triangle_rule(deg);
  const int nl = space.local_dof_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.triangle_count()) * nl * nl);

  if (space.form_order() == 1) {
    const FluxTab tab = tabulate_flux(space, rule);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry g = mesh.triangle_geometry(t);
      // Piola: value = J v / det, so (v_i, v_j) picks up J^T J / det^2;
      // the quadrature weight contributes det.
      const Eigen::Matrix2d m = g.jacobian.transpose() * g.jacobian / g.det;
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nl, nl);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& v = tab.vals[q];
        local += rule.points[q].w * v * m * v.transpose();
      }
      scatter(trips, space, space, t, local);
    }
  } else {
    const auto tab = tabulate_density(space, rule);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry g = mesh.triangle_geometry(t);
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nl, nl);
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        local += rule.points[q].w * g.det * tab[q] * tab[q].transpose();
      scatter(trips, space, space, t, local);
    }
  }

  SpMat mass(space.dof_count(), space.dof_count());
  mass.setFromTriplets(trips.begin(), trips.end());
  return mass;
}

MixedOperator assemble_mixed(const FESpace& sigma_space, const FESpace& u_space) {
  if (&sigma_space.mesh() != &u_space.mesh())
    throw ConfigError("assemble_mixed: spaces live on different meshes");
  if (sigma_space.form_order() != 1 || u_space.form_order() != 2)
    throw ConfigError("assemble_mixed: expected a (flux, density) pair");
  const ElementFamily su = u_space.element();
  const int target_r = sigma_space.element().div_target_degree();
  const int u_r = su.family == Family::Full ? su.degree : su.degree - 1;
  if (u_r != target_r)
    throw ConfigError("assemble_mixed: div " + sigma_space.element().name() +
                      " is DG" + std::to_string(target_r) + ", not " + su.name() +
                      " (pair violates div-compatibility)");

  MixedOperator op;
  op.sigma_space = &sigma_space;
  op.u_space = &u_space;
  op.A = assemble_mass(u_space);
  op.D = assemble_mass(sigma_space);

  const SimplicialMesh& mesh = sigma_space.mesh();
  const int deg = 2 * sigma_space.element().shape_degree() + 2;
  const TriangleRule& rule = triangle_rule(deg);
  const FluxTab stab = tabulate_flux(sigma_space, rule);
  const auto utab = tabulate_density(u_space, rule);
  const int ns = sigma_space.local_dof_count();
  const int nu = u_space.local_dof_count();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.triangle_count()) * ns * nu);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    // div(Piola v) = (ref div)/det and the weight contributes det, so the
    // geometry cancels: B is purely combinatorial up to reference integrals.
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nu, ns);
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      local += rule.points[q].w * utab[q] * stab.divs[q].transpose();
    scatter(trips, u_space, sigma_space, t, local);
  }
  op.B.resize(u_space.dof_count(), sigma_space.dof_count());
  op.B.setFromTriplets(trips.begin(), trips.end());
  return op;
}

LoadAssembler::LoadAssembler(const FESpace& target, TimeScalarField f, int quad_degree)
    : target_(&target), f_(std::move(f)), quad_degree_(quad_degree) {
  if (target.form_order() != 2)
    throw ConfigError("LoadAssembler: target must be a density space");
  // detect an identically-zero source so homogeneous runs skip quadrature
  zero_ = true;
  for (int i = 0; i < 7 && zero_; ++i)
    for (int j = 0; j < 7 && zero_; ++j)
      for (double t : {0.0, 0.37, 1.0})
        if (std::abs(f_({(i + 0.41) / 7.3, (j + 0.57) / 7.3}, t)) > 1e-13) {
          zero_ = false;
          break;
        }
}

Eigen::VectorXd LoadAssembler::assemble(double t) const {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(target_->dof_count());
  if (zero_) return load;
  const SimplicialMesh& mesh = target_->mesh();
  const TriangleRule& rule = triangle_rule(quad_degree_);
  const auto tab = tabulate_density(*target_, rule);
  const int nl = target_->local_dof_count();
  for (int k = 0; k < mesh.triangle_count(); ++k) {
    const TriangleGeometry g = mesh.triangle_geometry(k);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(nl);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& pt = rule.points[q];
      local += pt.w * g.det * f_(g.to_physical({pt.x, pt.y}), t) * tab[q];
    }
    for (int i = 0; i < nl; ++i) load[target_->local_to_global(k, i).global] += local[i];
  }
  return load;
}

void write_coordinate_format(std::ostream& os, const SpMat& m) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace feec2d
