#ifndef FEEC2D_MANUFACTURED_HPP
#define FEEC2D_MANUFACTURED_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "feec2d/expression.hpp"
#include "feec2d/solvers.hpp"

namespace feec2d {

/// A closed-form space-time solution with every derived field the studies
/// need, all obtained by symbolic differentiation of u(x,y,t).  The forcing
/// is built to satisfy the tagged PDE exactly:
///   parabolic     f = u_t - lap u
///   hyperbolic    f = u_tt - lap u
///   semi-linear   f = u_t - lap u + F(u)
struct ManufacturedSolution {
  std::string name;
  ProblemKind kind = ProblemKind::Parabolic;
  Expr u, u_t, u_tt;
  Expr du_dx, du_dy;        // sigma = grad u
  Expr lap_u, lap_u_t;
  Expr f;
  std::string nonlinearity;  // semi-linear only: "zero", "id" or "sin"

  TimeScalarField scalar(const Expr& e) const;
  ScalarField scalar_at(const Expr& e, double t) const;
  VectorField gradient_at(double t) const;

  /// Full H^s norm (s <= 2) of a derived scalar field at time t, by
  /// symbolic differentiation and composite quadrature over the mesh.
  double hs_norm_scalar(const Expr& w, int s, double t, const SimplicialMesh& mesh) const;
  double hs_norm_gradient(int s, double t, const SimplicialMesh& mesh) const;
};

ManufacturedSolution make_manufactured(ProblemKind kind, const std::string& u_source,
                                       const std::string& nonlinearity = "zero",
                                       const std::string& name = "inline");

NonlinearTerm nonlinear_term(const std::string& id);  // "zero", "id", "sin"

struct BuiltinSolution {
  std::string id;
  ProblemKind kind;
  std::string expression;
  std::string nonlinearity;
  std::string description;
};
const std::vector<BuiltinSolution>& builtin_solutions();
ManufacturedSolution builtin_solution(const std::string& id);

/// Self-consistency: finite-difference cross-check of the supplied
/// derivatives against u, exactness of the PDE identity for f, and
/// vanishing boundary trace, all at seeded random samples.
/// Throws ConfigError on violation.
void verify_consistency(const ManufacturedSolution& ms, unsigned seed = 20240901);

}  // namespace feec2d

#endif
