#ifndef FEEC2D_QUADRATURE_HPP
#define FEEC2D_QUADRATURE_HPP

#include <vector>

namespace feec2d {

/// Quadrature point on the reference triangle {(0,0),(1,0),(0,1)}.
/// Weights of a rule sum to the reference area 1/2, so that
/// \f$\int_T f \approx \det J \sum_q w_q f(F(x_q))\f$ on an affine image.
struct TriQuadPoint {
  double x, y, w;
};

struct TriangleRule {
  int degree;  // highest total polynomial degree integrated exactly
  std::vector<TriQuadPoint> points;
};

/// Smallest cached rule exact to at least `degree`.
/// Degrees <= 6 use fixed symmetric rules; higher degrees use a
/// collapsed tensor Gauss rule (positive weights, still exact).
const TriangleRule& triangle_rule(int degree);

/// Gauss-Legendre point on [0,1]; weights of a rule sum to 1.
struct SegQuadPoint {
  double s, w;
};

/// n-point Gauss-Legendre rule on [0,1], exact to degree 2n-1.
const std::vector<SegQuadPoint>& segment_rule(int n);

}  // namespace feec2d

#endif
