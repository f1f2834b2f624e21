#ifndef FEEC2D_ASSEMBLY_HPP
#define FEEC2D_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>

#include "feec2d/elements.hpp"

namespace feec2d {

using SpMat = Eigen::SparseMatrix<double>;
using TimeScalarField = std::function<double(const Eigen::Vector2d&, double)>;

/// The matrices of the mixed semi-discrete systems:
///   A = density mass,  D = flux mass,  B(i,j) = (div omega_j, phi_i).
/// Both evolution systems read  A u' - B sigma = F  against the first
/// equation and  B^T u + D sigma = 0 (or D sigma' + B^T mu = 0) against
/// the second; only B is stored, the transposed coupling is B^T.
struct MixedOperator {
  SpMat A;  // dofs(Lambda^n) x dofs(Lambda^n)
  SpMat D;  // dofs(Lambda^{n-1})^2
  SpMat B;  // dofs(Lambda^n) x dofs(Lambda^{n-1})
  const FESpace* sigma_space = nullptr;
  const FESpace* u_space = nullptr;
};

/// Assembles A, D, B for a compatible pair (div Lambda^{n-1}_h must land
/// inside Lambda^n_h: RT_r or BDM_{r+1} with DG_r, on the same mesh).
/// Entries are exact integrals; assembly order is deterministic.
MixedOperator assemble_mixed(const FESpace& sigma_space, const FESpace& u_space);

/// Mass matrix of a single space.
SpMat assemble_mass(const FESpace& space);

/// Time-dependent right-hand sides (f(.,t), phi_i) for a density space.
/// Linear in f; zero f yields the zero vector.
class LoadAssembler {
 public:
  LoadAssembler(const FESpace& target, TimeScalarField f, int quad_degree = 10);

  Eigen::VectorXd assemble(double t) const;
  const FESpace& target() const { return *target_; }
  int quad_degree() const { return quad_degree_; }
  /// True when the source was detected to vanish identically (sampled);
  /// assemble() then short-circuits to the zero vector.
  bool is_zero() const { return zero_; }

 private:
  const FESpace* target_;
  TimeScalarField f_;
  int quad_degree_;
  bool zero_ = false;
};

/// Coordinate-format dump: one "row col value" line per stored entry.
void write_coordinate_format(std::ostream& os, const SpMat& m);

}  // namespace feec2d

#endif
