#include "feec2d/solvers.hpp"

#include <cmath>
#include <random>

#include "feec2d/quadrature.hpp"

namespace feec2d {

std::vector<double> uniform_time_grid(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("time grid needs T > 0 and dt > 0");
  const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  std::vector<double> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = T * double(i) / double(steps);
  return times;
}

Trajectory make_trajectory(Scheme scheme, ProblemKind kind, std::vector<double> times,
                           Eigen::VectorXd u0, Eigen::VectorXd sigma0) {
  Trajectory traj;
  traj.scheme = scheme;
  traj.kind = kind;
  traj.times = std::move(times);
  traj.u.assign(traj.times.size(), Eigen::VectorXd());
  traj.sigma.assign(traj.times.size(), Eigen::VectorXd());
  traj.u[0] = std::move(u0);
  traj.sigma[0] = std::move(sigma0);
  return traj;
}

double NonlinearTerm::sampled_lipschitz(double lo, double hi, int samples,
                                        unsigned seed) const {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double a = dist(rng), b = dist(rng);
    if (std::abs(a - b) < 1e-12) continue;
    worst = std::max(worst, std::abs(F(a) - F(b)) / std::abs(a - b));
  }
  return worst;
}

//------------------------------------------------------------------------------
// SaddleSolver
//------------------------------------------------------------------------------

namespace {

// Exact inverse of the block-diagonal density mass matrix (blocks are one
// cell's moments; DG0 gives a diagonal, DG1 3x3 blocks).
SpMat invert_block_diagonal(const FESpace& u_space, const SpMat& a) {
  const int nl = u_space.local_dof_count();
  const int nt = u_space.mesh().triangle_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nt) * nl * nl);
  Eigen::MatrixXd block(nl, nl);
  for (int t = 0; t < nt; ++t) {
    const int base = nl * t;
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) block(i, j) = a.coeff(base + i, base + j);
    const Eigen::MatrixXd inv = block.inverse();
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) trips.emplace_back(base + i, base + j, inv(i, j));
  }
  SpMat out(a.rows(), a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

void check_residual(const char* what, double res, double rhs_norm, double tol) {
  const double scale = rhs_norm > 0.0 ? rhs_norm : 1.0;
  if (!(res <= tol * scale * 100.0))  // 100x slack over the factorization target
    throw SolverError(std::string(what) + ": relative residual " +
                      std::to_string(res / scale) + " exceeds tolerance");
}

}  // namespace

SaddleSolver::SaddleSolver(const MixedOperator& op, double tolerance)
    : op_(&op), tol_(tolerance) {
  a_inv_ = invert_block_diagonal(*op.u_space, op.A);
  const SpMat bt = SpMat(op.B.transpose());
  bt_ainv_b_ = bt * a_inv_ * op.B;

  // symmetric block form [D, B^T; B, 0]; the spec's sign convention
  // [D, B^T; -B, 0](sigma,u) = (0, load) is recovered by negating the load.
  const int ns = op.sigma_space->dof_count();
  const int nu = op.u_space->dof_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(op.D.nonZeros() + 2 * op.B.nonZeros());
  for (int k = 0; k < op.D.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.D, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < op.B.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.B, k); it; ++it) {
      trips.emplace_back(it.col(), ns + it.row(), it.value());  // B^T block
      trips.emplace_back(ns + it.row(), it.col(), it.value());  // B block
    }
  SpMat block(ns + nu, ns + nu);
  block.setFromTriplets(trips.begin(), trips.end());
  block_lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  block_lu_->compute(block);
  if (block_lu_->info() != Eigen::Success)
    throw SolverError(
        "elliptic block factorization failed: singular Schur complement "
        "(trivial-div-kernel hypothesis violated?)");
  block_matrix_ = std::move(block);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SaddleSolver::solve_elliptic_mixed(
    const Eigen::VectorXd& load) const {
  const int ns = op_->sigma_space->dof_count();
  const int nu = op_->u_space->dof_count();
  if (load.size() != nu)
    throw ConfigError("solve_elliptic_mixed: load has wrong dimension");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ns + nu);
  rhs.tail(nu) = -load;
  const Eigen::VectorXd x = block_lu_->solve(rhs);
  check_residual("elliptic solve", (block_matrix_ * x - rhs).norm(), rhs.norm(), tol_);
  return {x.tail(nu), x.head(ns)};
}

const SpMat& SaddleSolver::schur_matrix(double c) const {
  auto it = schur_cache_.find(c);
  if (it == schur_cache_.end()) {
    SpMat s = op_->D + c * bt_ainv_b_;
    auto llt = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
    llt->compute(s);
    if (llt->info() != Eigen::Success)
      throw SolverError("Schur complement D + c B^T A^{-1} B not SPD (c = " +
                        std::to_string(c) + ")");
    it = schur_cache_.emplace(c, std::make_pair(std::move(s), std::move(llt))).first;
  }
  return it->second.first;
}

Eigen::VectorXd SaddleSolver::solve_schur(double c, const Eigen::VectorXd& rhs) const {
  schur_matrix(c);  // ensure factorized
  const auto& entry = schur_cache_.at(c);
  Eigen::VectorXd x = entry.second->solve(rhs);
  check_residual("Schur solve", (entry.first * x - rhs).norm(), rhs.norm(), tol_);
  return x;
}

Eigen::VectorXd SaddleSolver::apply_mass_inverse_u(const Eigen::VectorXd& v) const {
  return a_inv_ * v;
}

Eigen::VectorXd SaddleSolver::solve_mass_sigma(const Eigen::VectorXd& v) const {
  if (!d_llt_) {
    d_llt_ = std::make_unique<Eigen::SimplicialLLT<SpMat>>();
    d_llt_->compute(op_->D);
    if (d_llt_->info() != Eigen::Success)
      throw SolverError("flux mass matrix not SPD");
  }
  Eigen::VectorXd x = d_llt_->solve(v);
  check_residual("flux mass solve", (op_->D * x - v).norm(), v.norm(), tol_);
  return x;
}

double SaddleSolver::a_norm(const Eigen::VectorXd& u) const {
  return std::sqrt(u.dot(op_->A * u));
}

double SaddleSolver::d_norm(const Eigen::VectorXd& sigma) const {
  return std::sqrt(sigma.dot(op_->D * sigma));
}

//------------------------------------------------------------------------------
// time stepping
//------------------------------------------------------------------------------

namespace {

void check_step_pre(const Trajectory& traj, int i) {
  if (i < 1 || i >= traj.node_count())
    throw ConfigError("step index " + std::to_string(i) + " out of range");
  if (traj.u[i - 1].size() == 0 || traj.sigma[i - 1].size() == 0)
    throw SolverError("step " + std::to_string(i) + ": previous node not populated");
}

// Backward Euler step of the parabolic system with an extra explicit load
// (used by the semi-linear fixed point; extra = 0 reproduces the linear step).
void parabolic_be(const SaddleSolver& s, const LoadAssembler& load, Trajectory& traj,
                  int i, const Eigen::VectorXd* extra) {
  const auto& op = s.op();
  const double dt = traj.times[i] - traj.times[i - 1];
  Eigen::VectorXd f = load.assemble(traj.times[i]);
  if (extra) f -= *extra;
  const Eigen::VectorXd bt_u = op.B.transpose() * traj.u[i - 1];
  const Eigen::VectorXd rhs = -bt_u - dt * (op.B.transpose() * s.apply_mass_inverse_u(f));
  traj.sigma[i] = s.solve_schur(dt, rhs);
  traj.u[i] =
      traj.u[i - 1] + dt * s.apply_mass_inverse_u(op.B * traj.sigma[i] + f);
  // residual of the full block system: A du - dt(B sigma + f) and D sigma + B^T u
  const Eigen::VectorXd r1 =
      op.A * (traj.u[i] - traj.u[i - 1]) - dt * (op.B * traj.sigma[i] + f);
  const Eigen::VectorXd r2 = op.D * traj.sigma[i] + op.B.transpose() * traj.u[i];
  const double scale = std::max(1.0, f.norm() + bt_u.norm());
  if (!(std::sqrt(r1.squaredNorm() + r2.squaredNorm()) <= 1e-8 * scale))
    throw SolverError("parabolic step " + std::to_string(i) + ": block residual too large");
}

// (D + (dt/2) B^T A^{-1} B) sigma_i =
//     -B^T [u_{i-1} + (dt/2) A^{-1}(B sigma_{i-1} + f_i + f_{i-1})]
void parabolic_cn(const SaddleSolver& s, const LoadAssembler& load, Trajectory& traj,
                  int i) {
  const auto& op = s.op();
  const double dt = traj.times[i] - traj.times[i - 1];
  const Eigen::VectorXd fsum =
      load.assemble(traj.times[i]) + load.assemble(traj.times[i - 1]);
  const Eigen::VectorXd rhs =
      -op.B.transpose() *
      (traj.u[i - 1] +
       0.5 * dt * s.apply_mass_inverse_u(op.B * traj.sigma[i - 1] + fsum));
  traj.sigma[i] = s.solve_schur(0.5 * dt, rhs);
  traj.u[i] = traj.u[i - 1] +
              0.5 * dt *
                  s.apply_mass_inverse_u(op.B * (traj.sigma[i] + traj.sigma[i - 1]) + fsum);
  const Eigen::VectorXd r2 = op.D * traj.sigma[i] + op.B.transpose() * traj.u[i];
  if (!(r2.norm() <= 1e-8 * std::max(1.0, traj.u[i].norm())))
    throw SolverError("parabolic CN step " + std::to_string(i) + ": constraint residual");
}

}  // namespace

void step_parabolic(const SaddleSolver& solver, const LoadAssembler& load,
                    Trajectory& traj, int i) {
  check_step_pre(traj, i);
  if (traj.scheme == Scheme::BackwardEuler)
    parabolic_be(solver, load, traj, i, nullptr);
  else
    parabolic_cn(solver, load, traj, i);
}

void step_hyperbolic(const SaddleSolver& solver, const LoadAssembler& load,
                     Trajectory& traj, int i) {
  check_step_pre(traj, i);
  const auto& op = solver.op();
  const double dt = traj.times[i] - traj.times[i - 1];
  if (traj.scheme == Scheme::BackwardEuler) {
    // (D + k^2 B^T A^{-1} B) Sigma_i = D Sigma_{i-1} - k B^T W_{i-1}
    //                                  - k^2 B^T A^{-1} F_i
    const Eigen::VectorXd f = load.assemble(traj.times[i]);
    const Eigen::VectorXd rhs = op.D * traj.sigma[i - 1] -
                                dt * (op.B.transpose() * traj.u[i - 1]) -
                                dt * dt *
                                    (op.B.transpose() * solver.apply_mass_inverse_u(f));
    traj.sigma[i] = solver.solve_schur(dt * dt, rhs);
    traj.u[i] = traj.u[i - 1] +
                dt * solver.apply_mass_inverse_u(op.B * traj.sigma[i] + f);
    const Eigen::VectorXd r1 =
        op.A * (traj.u[i] - traj.u[i - 1]) - dt * (op.B * traj.sigma[i] + f);
    const Eigen::VectorXd r2 = op.D * (traj.sigma[i] - traj.sigma[i - 1]) +
                               dt * (op.B.transpose() * traj.u[i]);
    const double scale = std::max(1.0, traj.u[i].norm() + traj.sigma[i].norm());
    if (!(std::sqrt(r1.squaredNorm() + r2.squaredNorm()) <= 1e-8 * scale))
      throw SolverError("hyperbolic BE step " + std::to_string(i) + ": residual too large");
  } else {
    // trapezoidal version of the skew system; conserves the discrete energy
    const double k2 = 0.25 * dt * dt;
    const Eigen::VectorXd favg =
        0.5 * (load.assemble(traj.times[i]) + load.assemble(traj.times[i - 1]));
    const Eigen::VectorXd rhs =
        op.D * traj.sigma[i - 1] - dt * (op.B.transpose() * traj.u[i - 1]) -
        k2 * (op.B.transpose() *
              solver.apply_mass_inverse_u(op.B * traj.sigma[i - 1] + 2.0 * favg));
    traj.sigma[i] = solver.solve_schur(k2, rhs);
    traj.u[i] = traj.u[i - 1] +
                0.5 * dt *
                    solver.apply_mass_inverse_u(
                        op.B * (traj.sigma[i] + traj.sigma[i - 1]) + 2.0 * favg);
    const Eigen::VectorXd r2 = op.D * (traj.sigma[i] - traj.sigma[i - 1]) +
                               0.5 * dt * (op.B.transpose() * (traj.u[i] + traj.u[i - 1]));
    const double scale = std::max(1.0, traj.u[i].norm() + traj.sigma[i].norm());
    if (!(r2.norm() <= 1e-8 * scale))
      throw SolverError("hyperbolic CN step " + std::to_string(i) + ": residual too large");
  }
}

Eigen::VectorXd nonlinear_load(const FESpace& u_space, const NonlinearTerm& nl,
                               const Eigen::VectorXd& u_coeffs, int quad_degree) {
  const SimplicialMesh& mesh = u_space.mesh();
  const TriangleRule& rule = triangle_rule(quad_degree);
  const int nloc = u_space.local_dof_count();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u_space.dof_count());
  Eigen::VectorXd vals;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = mesh.triangle_geometry(t);
    for (const auto& q : rule.points) {
      u_space.eval_reference_scalar({q.x, q.y}, vals);
      double uh = 0.0;
      for (int j = 0; j < nloc; ++j)
        uh += u_coeffs[u_space.local_to_global(t, j).global] * vals(j);
      const double fq = q.w * g.det * nl.F(uh);
      for (int j = 0; j < nloc; ++j)
        out[u_space.local_to_global(t, j).global] += fq * vals(j);
    }
  }
  return out;
}

void step_semilinear(const SaddleSolver& solver, const LoadAssembler& load,
                     const NonlinearTerm& nl, Trajectory& traj, int i) {
  check_step_pre(traj, i);
  if (traj.scheme != Scheme::BackwardEuler)
    throw ConfigError("semi-linear stepping is IMEX backward Euler only");
  const FESpace& u_space = *solver.op().u_space;
  const double dt = traj.times[i] - traj.times[i - 1];
  Eigen::VectorXd iterate = traj.u[i - 1];
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd nload = nonlinear_load(u_space, nl, iterate);
    parabolic_be(solver, load, traj, i, &nload);
    const double diff = solver.a_norm(traj.u[i] - iterate);
    iterate = traj.u[i];
    if (diff < 1e-10) return;
  }
  throw SolverError("semi-linear fixed point failed to converge in 50 iterations at step " +
                    std::to_string(i) + " (dt * C = " +
                    std::to_string(dt * nl.lipschitz_bound) + ")");
}

void run_steps(const SaddleSolver& solver, const LoadAssembler& load, Trajectory& traj,
               const NonlinearTerm* nl) {
  for (int i = 1; i < traj.node_count(); ++i) {
    switch (traj.kind) {
      case ProblemKind::Parabolic:
        step_parabolic(solver, load, traj, i);
        break;
      case ProblemKind::Hyperbolic:
        step_hyperbolic(solver, load, traj, i);
        break;
      case ProblemKind::SemiLinear:
        if (!nl) throw ConfigError("semi-linear run needs a NonlinearTerm");
        step_semilinear(solver, load, *nl, traj, i);
        break;
    }
  }
}

}  // namespace feec2d
