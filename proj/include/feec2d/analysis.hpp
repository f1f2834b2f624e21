#ifndef FEEC2D_ANALYSIS_HPP
#define FEEC2D_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "feec2d/manufactured.hpp"
#include "feec2d/solvers.hpp"

namespace feec2d {

/// Spatial L2 errors of one trajectory node against the exact fields.
struct SpatialError {
  double u = 0.0;          // density variable (u_h or mu_h)
  double sigma = 0.0;
  double div_sigma = 0.0;
};

SpatialError spatial_error(const FESpace& sigma_space, const FESpace& u_space,
                           const Eigen::VectorXd& sigma, const Eigen::VectorXd& u,
                           const ManufacturedSolution& ms, double t, int quad_degree = 8);

/// L2(I, L2) Bochner errors: spatial errors at the nodes, composite
/// trapezoid in time on the squared values, square root at the end.
/// Parabolic/semi-linear runs fill `u`; hyperbolic runs fill `mu`
/// (the density variable approximates u_t there).
struct BochnerError {
  double u = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double div_sigma = 0.0;
  std::string time_rule = "composite-trapezoid";
};

BochnerError bochner_error(const Trajectory& traj, const ManufacturedSolution& ms,
                           const FESpace& sigma_space, const FESpace& u_space,
                           int quad_degree = 8);

/// Per-node elliptic-projection split:
///   rho = u_tilde - u (exact),  theta = u_h - u_tilde,  eps = sigma_h - sigma_tilde,
/// where (u_tilde, sigma_tilde) solves the time-ignorant elliptic problem
/// with load -lap u(t).  theta(0) and eps(0) vanish for heat runs whose
/// initial data came from the same elliptic solve.
struct NodeSplit {
  double rho = 0.0;
  double theta = 0.0;
  double eps = 0.0;
};

std::vector<NodeSplit> error_decomposition(const Trajectory& traj,
                                           const ManufacturedSolution& ms,
                                           const SaddleSolver& solver,
                                           int load_quad_degree = 10);

/// Elliptic projection at one time: solves with load -lap u(t0).
std::pair<Eigen::VectorXd, Eigen::VectorXd> elliptic_projection(
    const SaddleSolver& solver, const ManufacturedSolution& ms, double t0,
    int load_quad_degree = 10);

/// The three right-hand-side terms of the hyperbolic estimate:
///   E1 = ||u1 - u1_h|| + ||grad u0 - (grad u0)_h||   (initial-data discretization)
///   E2 = ||u1||_{H^s} + ||grad u0||_{H^s}            (initial-data regularity)
///   E3 = ||u_t||_{L2(I,H^s)} + ||sigma||_{L2(I,H^s)} (solution regularity)
struct HyperbolicTerms {
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
};

HyperbolicTerms hyperbolic_error_terms(const ManufacturedSolution& ms,
                                       const FESpace& sigma_space, const FESpace& u_space,
                                       const Trajectory& traj, int sobolev_order);

/// log2(e_L / e_{L+1}) per refinement gap; `nullopt` marks a gap touching a
/// zero error ("exact").  Requires at least 2 levels and h halving.
std::vector<std::optional<double>> compute_eoc(const std::vector<double>& h,
                                               const std::vector<double>& errors);

/// Discrete energy ||u||_A^2 + ||sigma||_D^2 per node.
std::vector<double> trajectory_energy(const Trajectory& traj, const MixedOperator& op);

/// Discrete residual of the error-function identity
///   (theta_t, phi) - (div eps, phi) = -(rho_t, phi)
/// with backward differences in time; exact for the time-continuous
/// semi-discrete system, O(dt) under time stepping.  Returns the max over
/// interior nodes of the euclidean residual norm, plus the max constraint
/// residual of the second identity (near zero).
struct LemmaResidual {
  double first_equation = 0.0;
  double second_equation = 0.0;
};

LemmaResidual lemma_error_equation_residual(const Trajectory& traj,
                                            const ManufacturedSolution& ms,
                                            const SaddleSolver& solver,
                                            int load_quad_degree = 10);

}  // namespace feec2d

#endif
