#ifndef FEEC2D_SOLVERS_HPP
#define FEEC2D_SOLVERS_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "feec2d/assembly.hpp"

namespace feec2d {

enum class Scheme { BackwardEuler, CrankNicolson };
enum class ProblemKind { Parabolic, Hyperbolic, SemiLinear };

/// Time grid plus coefficient vectors at each node: the discrete stand-in
/// for the Bochner fields u_h(t) (or mu_h(t)) and sigma_h(t).
struct Trajectory {
  std::vector<double> times;              // strictly increasing, covers [0, T]
  std::vector<Eigen::VectorXd> u;         // density coefficients per node
  std::vector<Eigen::VectorXd> sigma;     // flux coefficients per node
  Scheme scheme = Scheme::BackwardEuler;
  ProblemKind kind = ProblemKind::Parabolic;

  int node_count() const { return static_cast<int>(times.size()); }
  double final_time() const { return times.back(); }
};

/// Uniform grid 0 = t_0 < ... < t_M = T with M = ceil(T/dt) steps.
std::vector<double> uniform_time_grid(double T, double dt);

Trajectory make_trajectory(Scheme scheme, ProblemKind kind, std::vector<double> times,
                           Eigen::VectorXd u0, Eigen::VectorXd sigma0);

/// Lipschitz pointwise nonlinearity F for the semi-linear problem.
struct NonlinearTerm {
  std::function<double(double)> F;
  double lipschitz_bound = 0.0;

  /// Samples value pairs in [lo, hi] and checks |F(a)-F(b)| <= C |a-b|.
  /// Returns the largest observed ratio; callers assert <= lipschitz_bound.
  double sampled_lipschitz(double lo, double hi, int samples, unsigned seed) const;
};

/// Direct sparse solves for the mixed systems, with factorization caches.
///
/// Every solve is followed by a residual check ||Kx-b|| <= tol * ||b||;
/// violations throw SolverError.  Not safe for concurrent mutation (lazy
/// caches); concurrent read-only solves after warm-up are fine.
class SaddleSolver {
 public:
  explicit SaddleSolver(const MixedOperator& op, double tolerance = 1e-12);

  const MixedOperator& op() const { return *op_; }
  double tolerance() const { return tol_; }

  /// Solves the time-ignorant discrete elliptic problem
  ///   [D, B^T; -B, 0] (sigma, u) = (0, load),
  /// i.e. -(div sigma, phi) = (load, phi) with (sigma, w) + (u, div w) = 0.
  /// Returns (u, sigma).  A singular system signals a violated
  /// trivial-div-kernel hypothesis.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_elliptic_mixed(
      const Eigen::VectorXd& load) const;

  /// Solve with the SPD reduced matrix D + c B^T A^{-1} B (cached per c).
  Eigen::VectorXd solve_schur(double c, const Eigen::VectorXd& rhs) const;
  /// A^{-1} v via the block-diagonal inverse of the density mass matrix.
  Eigen::VectorXd apply_mass_inverse_u(const Eigen::VectorXd& v) const;
  /// D^{-1} v (flux mass solve).
  Eigen::VectorXd solve_mass_sigma(const Eigen::VectorXd& v) const;

  double a_norm(const Eigen::VectorXd& u) const;
  double d_norm(const Eigen::VectorXd& sigma) const;

 private:
  const SpMat& schur_matrix(double c) const;

  const MixedOperator* op_;
  double tol_;
  SpMat a_inv_;            // exact block-diagonal inverse
  SpMat bt_ainv_b_;
  SpMat block_matrix_;     // [D, B^T; B, 0]
  std::unique_ptr<Eigen::SparseLU<SpMat>> block_lu_;
  mutable std::map<double, std::pair<SpMat, std::unique_ptr<Eigen::SimplicialLLT<SpMat>>>>
      schur_cache_;
  mutable std::unique_ptr<Eigen::SimplicialLLT<SpMat>> d_llt_;
};

/// One implicit step of the mixed heat system
///   A u' - B sigma = F,  B^T u + D sigma = 0,
/// realized through the SPD reduction (D + dt_eff B^T A^{-1} B) sigma = rhs
/// followed by the explicit u update.  Node i-1 must be populated.
void step_parabolic(const SaddleSolver& solver, const LoadAssembler& load,
                    Trajectory& traj, int i);

/// One implicit step of the velocity-stress wave system
///   A mu' - B sigma = F,  D sigma' + B^T mu = 0,
/// via (D + k^2 B^T A^{-1} B) for backward Euler and the trapezoidal
/// analogue for Crank-Nicolson (which conserves ||mu||_A^2 + ||sigma||_D^2
/// when F = 0).
void step_hyperbolic(const SaddleSolver& solver, const LoadAssembler& load,
                     Trajectory& traj, int i);

/// IMEX backward Euler for the semi-linear system: the Laplacian block is
/// implicit, (F(u_h), phi_h) is lagged inside a fixed-point loop that
/// terminates when successive u-iterates differ by < 1e-10 in the A-norm
/// (contractive when dt * C < 1).  Throws SolverError after 50 iterations.
void step_semilinear(const SaddleSolver& solver, const LoadAssembler& load,
                     const NonlinearTerm& nl, Trajectory& traj, int i);

/// (F(u_h), phi_i) assembled by quadrature of the pointwise nonlinearity.
Eigen::VectorXd nonlinear_load(const FESpace& u_space, const NonlinearTerm& nl,
                               const Eigen::VectorXd& u_coeffs, int quad_degree = 10);

/// Runs every step of a fully allocated trajectory.
void run_steps(const SaddleSolver& solver, const LoadAssembler& load, Trajectory& traj,
               const NonlinearTerm* nl = nullptr);

}  // namespace feec2d

#endif
