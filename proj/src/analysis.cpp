#include "feec2d/analysis.hpp"

#include <cmath>

#include "feec2d/quadrature.hpp"

namespace feec2d {

SpatialError spatial_error(const FESpace& sigma_space, const FESpace& u_space,
                           const Eigen::VectorXd& sigma, const Eigen::VectorXd& u,
                           const ManufacturedSolution& ms, double t, int quad_degree) {
  if (sigma.size() != sigma_space.dof_count() || u.size() != u_space.dof_count())
    throw ConfigError("spatial_error: coefficient sizes do not match the spaces");
  const SimplicialMesh& mesh = sigma_space.mesh();
  const TriangleRule& rule = triangle_rule(quad_degree);

  // the exact counterpart of the density variable is u for parabolic runs
  // and u_t for the velocity-stress system
  double eu = 0.0, es = 0.0, ed = 0.0;
  Eigen::Matrix<double, Eigen::Dynamic, 2> rv;
  Eigen::VectorXd rd, ru;
  const int ns = sigma_space.local_dof_count();
  const int nu = u_space.local_dof_count();
  for (int k = 0; k < mesh.triangle_count(); ++k) {
    const TriangleGeometry g = mesh.triangle_geometry(k);
    for (const auto& q : rule.points) {
      sigma_space.eval_reference({q.x, q.y}, rv, rd);
      u_space.eval_reference_scalar({q.x, q.y}, ru);
      const Eigen::Vector2d x = g.to_physical({q.x, q.y});
      Eigen::Vector2d sh = Eigen::Vector2d::Zero();
      double dh = 0.0, uh = 0.0;
      for (int j = 0; j < ns; ++j) {
        const auto dof = sigma_space.local_to_global(k, j);
        const double c = dof.sign * sigma[dof.global];
        sh += c * (g.jacobian * rv.row(j).transpose()) / g.det;
        dh += c * rd(j) / g.det;
      }
      for (int j = 0; j < nu; ++j) {
        const auto dof = u_space.local_to_global(k, j);
        uh += dof.sign * u[dof.global] * ru(j);
      }
      const double ue = ms.kind == ProblemKind::Hyperbolic ? ms.u_t(x.x(), x.y(), t)
                                                           : ms.u(x.x(), x.y(), t);
      const Eigen::Vector2d se(ms.du_dx(x.x(), x.y(), t), ms.du_dy(x.x(), x.y(), t));
      const double de = ms.lap_u(x.x(), x.y(), t);
      eu += q.w * g.det * (uh - ue) * (uh - ue);
      es += q.w * g.det * (sh - se).squaredNorm();
      ed += q.w * g.det * (dh - de) * (dh - de);
    }
  }
  return {std::sqrt(eu), std::sqrt(es), std::sqrt(ed)};
}

BochnerError bochner_error(const Trajectory& traj, const ManufacturedSolution& ms,
                           const FESpace& sigma_space, const FESpace& u_space,
                           int quad_degree) {
  BochnerError out;
  const int n = traj.node_count();
  std::vector<SpatialError> nodes(n);
  for (int i = 0; i < n; ++i)
    nodes[i] = spatial_error(sigma_space, u_space, traj.sigma[i], traj.u[i], ms,
                             traj.times[i], quad_degree);
  double iu = 0.0, is = 0.0, id = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    iu += 0.5 * dt * (nodes[i].u * nodes[i].u + nodes[i + 1].u * nodes[i + 1].u);
    is += 0.5 * dt * (nodes[i].sigma * nodes[i].sigma +
                      nodes[i + 1].sigma * nodes[i + 1].sigma);
    id += 0.5 * dt * (nodes[i].div_sigma * nodes[i].div_sigma +
                      nodes[i + 1].div_sigma * nodes[i + 1].div_sigma);
  }
  const double nu = std::sqrt(iu);
  if (traj.kind == ProblemKind::Hyperbolic)
    out.mu = nu;
  else
    out.u = nu;
  out.sigma = std::sqrt(is);
  out.div_sigma = std::sqrt(id);
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> elliptic_projection(
    const SaddleSolver& solver, const ManufacturedSolution& ms, double t0,
    int load_quad_degree) {
  const Expr neg_lap = -ms.lap_u;
  LoadAssembler load(*solver.op().u_space, ms.scalar(neg_lap), load_quad_degree);
  return solver.solve_elliptic_mixed(load.assemble(t0));
}

std::vector<NodeSplit> error_decomposition(const Trajectory& traj,
                                           const ManufacturedSolution& ms,
                                           const SaddleSolver& solver,
                                           int load_quad_degree) {
  const FESpace& us = *solver.op().u_space;
  const FESpace& ss = *solver.op().sigma_space;
  std::vector<NodeSplit> out(traj.node_count());
  for (int i = 0; i < traj.node_count(); ++i) {
    const auto [ut, st] = elliptic_projection(solver, ms, traj.times[i], load_quad_degree);
    // rho is a genuine field error; theta and eps are discrete differences
    const SpatialError rho =
        spatial_error(ss, us, st, ut, ms, traj.times[i], 8);
    out[i].rho = rho.u;
    out[i].theta = solver.a_norm(traj.u[i] - ut);
    out[i].eps = solver.d_norm(traj.sigma[i] - st);
  }
  return out;
}

HyperbolicTerms hyperbolic_error_terms(const ManufacturedSolution& ms,
                                       const FESpace& sigma_space, const FESpace& u_space,
                                       const Trajectory& traj, int s) {
  HyperbolicTerms out;
  const SimplicialMesh& mesh = sigma_space.mesh();

  // E1: L2 field distance between the exact initial data and whatever the
  // trajectory actually started from
  const TriangleRule& rule = triangle_rule(8);
  double e1u = 0.0, e1s = 0.0;
  for (int k = 0; k < mesh.triangle_count(); ++k) {
    const TriangleGeometry g = mesh.triangle_geometry(k);
    for (const auto& q : rule.points) {
      const Eigen::Vector2d ref(q.x, q.y);
      const Eigen::Vector2d x = g.to_physical(ref);
      const double uh = u_space.eval_scalar(k, ref, traj.u[0]);
      const Eigen::Vector2d sh = sigma_space.eval_vector(k, ref, traj.sigma[0]);
      const double u1 = ms.u_t(x.x(), x.y(), 0.0);
      const Eigen::Vector2d g0(ms.du_dx(x.x(), x.y(), 0.0), ms.du_dy(x.x(), x.y(), 0.0));
      e1u += q.w * g.det * (uh - u1) * (uh - u1);
      e1s += q.w * g.det * (sh - g0).squaredNorm();
    }
  }
  out.e1 = std::sqrt(e1u) + std::sqrt(e1s);

  // E2 at t = 0
  out.e2 = ms.hs_norm_scalar(ms.u_t, s, 0.0, mesh) + ms.hs_norm_gradient(s, 0.0, mesh);

  // E3: composite Simpson in time of the squared H^s norms (the fields are
  // analytic, so a fixed fine grid is plenty)
  const int m = 64;  // intervals, even
  const double T = traj.final_time();
  double acc_ut = 0.0, acc_sigma = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = T * double(i) / double(m);
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double nut = ms.hs_norm_scalar(ms.u_t, s, t, mesh);
    const double nsig = ms.hs_norm_gradient(s, t, mesh);
    acc_ut += w * nut * nut;
    acc_sigma += w * nsig * nsig;
  }
  const double hsimp = T / m / 3.0;
  out.e3 = std::sqrt(hsimp * acc_ut) + std::sqrt(hsimp * acc_sigma);
  return out;
}

std::vector<std::optional<double>> compute_eoc(const std::vector<double>& h,
                                               const std::vector<double>& errors) {
  if (h.size() != errors.size() || h.size() < 2)
    throw ConfigError("compute_eoc: need matching h/error lists with >= 2 levels");
  for (std::size_t i = 0; i + 1 < h.size(); ++i)
    if (std::abs(h[i + 1] - 0.5 * h[i]) > 1e-9 * h[i])
      throw ConfigError("compute_eoc: mesh sizes do not halve");
  std::vector<std::optional<double>> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] <= 0.0 || errors[i + 1] <= 0.0)
      out.push_back(std::nullopt);  // "exact"
    else
      out.push_back(std::log2(errors[i] / errors[i + 1]));
  }
  return out;
}

std::vector<double> trajectory_energy(const Trajectory& traj, const MixedOperator& op) {
  std::vector<double> e(traj.node_count());
  for (int i = 0; i < traj.node_count(); ++i)
    e[i] = traj.u[i].dot(op.A * traj.u[i]) + traj.sigma[i].dot(op.D * traj.sigma[i]);
  return e;
}

LemmaResidual lemma_error_equation_residual(const Trajectory& traj,
                                            const ManufacturedSolution& ms,
                                            const SaddleSolver& solver,
                                            int load_quad_degree) {
  const auto& op = solver.op();
  const FESpace& us = *op.u_space;
  LoadAssembler ut_load(us, ms.scalar(ms.u_t), load_quad_degree);
  const Expr neg_lap_t = -ms.lap_u_t;
  LoadAssembler lap_t_load(us, ms.scalar(neg_lap_t), load_quad_degree);

  LemmaResidual out;
  Eigen::VectorXd theta_prev;
  for (int i = 0; i < traj.node_count(); ++i) {
    const double t = traj.times[i];
    const auto [ut, st] = elliptic_projection(solver, ms, t, load_quad_degree);
    const Eigen::VectorXd theta = traj.u[i] - ut;
    const Eigen::VectorXd eps = traj.sigma[i] - st;
    // second identity (eps, w) + (theta, div w) = 0 holds node by node
    out.second_equation = std::max(
        out.second_equation, (op.D * eps + op.B.transpose() * theta).norm());
    if (i >= 1) {
      const double dt = t - traj.times[i - 1];
      // (rho_t, phi): time derivative of the elliptic projection solves the
      // elliptic problem with load -lap u_t
      const Eigen::VectorXd ut_dot =
          solver.solve_elliptic_mixed(lap_t_load.assemble(t)).first;
      const Eigen::VectorXd rho_t_vec = op.A * ut_dot - ut_load.assemble(t);
      const Eigen::VectorXd r =
          op.A * (theta - theta_prev) / dt - op.B * eps + rho_t_vec;
      out.first_equation = std::max(out.first_equation, r.norm());
    }
    theta_prev = theta;
  }
  return out;
}

}  // namespace feec2d
