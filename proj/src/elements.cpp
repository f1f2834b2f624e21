#include "feec2d/elements.hpp"

#include <cmath>
#include <stdexcept>

#include "feec2d/quadrature.hpp"

namespace feec2d {

//------------------------------------------------------------------------------
// ElementFamily
//------------------------------------------------------------------------------

bool ElementFamily::admissible() const {
  if (form_order == 1) {
    if (family == Family::Trimmed) return degree == 1 || degree == 2;  // RT0, RT1
    return degree == 1;                                                // BDM1
  }
  if (form_order == 2) {
    if (family == Family::Full) return degree == 0 || degree == 1;     // DG0, DG1
    return degree == 1 || degree == 2;                                 // same spaces
  }
  return false;
}

int ElementFamily::shape_degree() const {
  if (form_order == 2) return family == Family::Full ? degree : degree - 1;
  return degree;  // both P_d and P^-_d flux spaces contain degree-d shapes
}

int ElementFamily::div_target_degree() const {
  if (form_order != 1) throw ConfigError("div_target_degree: not a flux space");
  return degree - 1;  // div RT_r = div BDM_{r+1} = DG_r
}

std::string ElementFamily::name() const {
  if (form_order == 1) {
    if (family == Family::Trimmed) return "RT" + std::to_string(degree - 1);
    return "BDM" + std::to_string(degree);
  }
  int r = family == Family::Full ? degree : degree - 1;
  return "DG" + std::to_string(r);
}

int simplex_dim(Family family, int degree, int form_order) {
  const int r = degree;
  if (form_order == 1)
    return family == Family::Full ? (r + 1) * (r + 2) : r * (r + 2);
  if (form_order == 2)
    return family == Family::Full ? (r + 1) * (r + 2) / 2 : r * (r + 1) / 2;
  throw ConfigError("simplex_dim: form order must be 1 or 2");
}

//------------------------------------------------------------------------------
// Reference element
//
// Reference triangle {(0,0),(1,0),(0,1)}.  Local edge i is opposite vertex i,
// parametrized from its low local vertex to the high one:
//   e0: (1,0)->(0,1)   e1: (0,0)->(0,1)   e2: (0,0)->(1,0)
// The dof normal of edge i is the parametrization direction rotated by -90
// degrees; that is the outward normal for e0 and e2 and the inward one for e1.
// With this convention a Piola-mapped shape function picks up the sign
// parity^(m+1) where parity compares local and global vertex order and m is
// the Legendre moment order, so linear moments never flip.
//------------------------------------------------------------------------------

namespace {

struct RefEdge {
  Eigen::Vector2d from, to, normal;
  double length;
};

const std::array<RefEdge, 3>& ref_edges() {
  static const std::array<RefEdge, 3> e = {{
      {{1.0, 0.0}, {0.0, 1.0}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, std::sqrt(2.0)},
      {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, 1.0},
      {{0.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, 1.0},
  }};
  return e;
}

double legendre01(int m, double s) { return m == 0 ? 1.0 : 2.0 * s - 1.0; }

// Monomial spanning sets with divergences.
struct SpanFn {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> val;
  std::function<double(const Eigen::Vector2d&)> div;
};

std::vector<SpanFn> flux_span(const ElementFamily& fam) {
  std::vector<SpanFn> s;
  auto c = [](double vx, double vy) {
    return SpanFn{[vx, vy](const Eigen::Vector2d&) { return Eigen::Vector2d(vx, vy); },
                  [](const Eigen::Vector2d&) { return 0.0; }};
  };
  if (fam == ElementFamily::raviart_thomas(0)) {
    s.push_back(c(1, 0));
    s.push_back(c(0, 1));
    s.push_back({[](const Eigen::Vector2d& p) { return p; },
                 [](const Eigen::Vector2d&) { return 2.0; }});
    return s;
  }
  // P_1^2 block shared by BDM1 and RT1
  s.push_back(c(1, 0));
  s.push_back({[](const Eigen::Vector2d& p) { return Eigen::Vector2d(p.x(), 0); },
               [](const Eigen::Vector2d&) { return 1.0; }});
  s.push_back({[](const Eigen::Vector2d& p) { return Eigen::Vector2d(p.y(), 0); },
               [](const Eigen::Vector2d&) { return 0.0; }});
  s.push_back(c(0, 1));
  s.push_back({[](const Eigen::Vector2d& p) { return Eigen::Vector2d(0, p.x()); },
               [](const Eigen::Vector2d&) { return 0.0; }});
  s.push_back({[](const Eigen::Vector2d& p) { return Eigen::Vector2d(0, p.y()); },
               [](const Eigen::Vector2d&) { return 1.0; }});
  if (fam == ElementFamily::raviart_thomas(1)) {
    // x * H_1: the two quadratic trimmed directions
    s.push_back({[](const Eigen::Vector2d& p) {
                   return Eigen::Vector2d(p.x() * p.x(), p.x() * p.y());
                 },
                 [](const Eigen::Vector2d& p) { return 3.0 * p.x(); }});
    s.push_back({[](const Eigen::Vector2d& p) {
                   return Eigen::Vector2d(p.x() * p.y(), p.y() * p.y());
                 },
                 [](const Eigen::Vector2d& p) { return 3.0 * p.y(); }});
  }
  return s;
}

struct RefDof {
  enum class Kind { Edge, Interior } kind;
  int edge = 0, moment = 0;  // Kind::Edge
  int comp = 0;              // Kind::Interior
};

double apply_ref_dof(const RefDof& dof, const SpanFn& fn) {
  if (dof.kind == RefDof::Kind::Edge) {
    const RefEdge& e = ref_edges()[dof.edge];
    double acc = 0.0;
    for (const auto& q : segment_rule(6)) {
      Eigen::Vector2d p = e.from + q.s * (e.to - e.from);
      acc += q.w * fn.val(p).dot(e.normal) * legendre01(dof.moment, q.s);
    }
    return acc * e.length;
  }
  double acc = 0.0;
  for (const auto& q : triangle_rule(6).points)
    acc += q.w * fn.val({q.x, q.y})[dof.comp];
  return acc;
}

struct FluxRefElement {
  std::vector<RefDof> dofs;
  std::vector<SpanFn> span;
  Eigen::MatrixXd coeff;  // shape_j = sum_m coeff(m, j) * span_m

  explicit FluxRefElement(const ElementFamily& fam) {
    span = flux_span(fam);
    const int epm = fam.family == Family::Trimmed && fam.degree == 1 ? 1 : 2;
    for (int e = 0; e < 3; ++e)
      for (int m = 0; m < epm; ++m) dofs.push_back({RefDof::Kind::Edge, e, m, 0});
    if (fam == ElementFamily::raviart_thomas(1))
      for (int c = 0; c < 2; ++c) dofs.push_back({RefDof::Kind::Interior, 0, 0, c});
    const int n = static_cast<int>(dofs.size());
    if (n != static_cast<int>(span.size()))
      throw std::logic_error("flux element dof/span size mismatch");
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = apply_ref_dof(dofs[i], span[j]);
    coeff = v.inverse();
  }

  void eval(const Eigen::Vector2d& p, Eigen::Matrix<double, Eigen::Dynamic, 2>& vals,
            Eigen::VectorXd& divs) const {
    const int n = static_cast<int>(dofs.size());
    vals.resize(n, 2);
    divs.resize(n);
    Eigen::MatrixXd sv(n, 2);
    Eigen::VectorXd sd(n);
    for (int m = 0; m < n; ++m) {
      sv.row(m) = span[m].val(p).transpose();
      sd(m) = span[m].div(p);
    }
    for (int j = 0; j < n; ++j) {
      vals.row(j) = coeff.col(j).transpose() * sv;
      divs(j) = coeff.col(j).dot(sd);
    }
  }
};

const FluxRefElement& flux_ref(const ElementFamily& fam) {
  static const FluxRefElement rt0(ElementFamily::raviart_thomas(0));
  static const FluxRefElement bdm1(ElementFamily::brezzi_douglas_marini(1));
  static const FluxRefElement rt1(ElementFamily::raviart_thomas(1));
  if (fam == ElementFamily::raviart_thomas(0)) return rt0;
  if (fam == ElementFamily::brezzi_douglas_marini(1)) return bdm1;
  if (fam == ElementFamily::raviart_thomas(1)) return rt1;
  throw ConfigError("unsupported flux element " + fam.name());
}

// Density (DG) reference: monomial shapes {1} or {1, x, y}; the dof
// functionals are the L2-dual moments, applied via the local mass matrix.
int density_local_dim(const ElementFamily& fam) {
  const int r = fam.family == Family::Full ? fam.degree : fam.degree - 1;
  return (r + 1) * (r + 2) / 2;
}

void density_eval(int nloc, const Eigen::Vector2d& p, Eigen::VectorXd& vals) {
  vals.resize(nloc);
  vals(0) = 1.0;
  if (nloc > 1) {
    vals(1) = p.x();
    vals(2) = p.y();
  }
}

const Eigen::MatrixXd& density_mass_inverse(int nloc) {
  static const Eigen::MatrixXd m1 = [] {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = 2.0;
    return m;
  }();
  static const Eigen::MatrixXd m3 = [] {
    Eigen::MatrixXd m(3, 3);
    // moments of {1, x, y} over the reference triangle
    m << 1.0 / 2, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 12, 1.0 / 24, 1.0 / 6, 1.0 / 24,
        1.0 / 12;
    return m.inverse().eval();
  }();
  return nloc == 1 ? m1 : m3;
}

void check_inside_reference(const Eigen::Vector2d& p) {
  const double tol = 1e-12;
  if (p.x() < -tol || p.y() < -tol || p.x() + p.y() > 1.0 + tol)
    throw std::domain_error("point outside the reference triangle");
}

}  // namespace

//------------------------------------------------------------------------------
// FESpace
//------------------------------------------------------------------------------

FESpace::FESpace(const SimplicialMesh& mesh, ElementFamily element)
    : mesh_(&mesh), element_(element) {
  if (!element.admissible())
    throw ConfigError("inadmissible element combination " + element.name() +
                      " (family/degree/form order)");
  if (element_.form_order == 1) {
    moments_per_edge_ = element_ == ElementFamily::raviart_thomas(0) ? 1 : 2;
    interior_per_tri_ = element_ == ElementFamily::raviart_thomas(1) ? 2 : 0;
    dof_count_ =
        moments_per_edge_ * mesh.edge_count() + interior_per_tri_ * mesh.triangle_count();
  } else {
    moments_per_edge_ = 0;
    interior_per_tri_ = density_local_dim(element_);
    dof_count_ = interior_per_tri_ * mesh.triangle_count();
  }
}

int FESpace::local_dof_count() const {
  return element_.form_order == 1 ? 3 * moments_per_edge_ + interior_per_tri_
                                  : interior_per_tri_;
}

FESpace::DofRef FESpace::local_to_global(int tri, int local) const {
  if (element_.form_order == 2) return {interior_per_tri_ * tri + local, 1.0};
  const int nedge = 3 * moments_per_edge_;
  if (local < nedge) {
    const int le = local / moments_per_edge_;
    const int m = local % moments_per_edge_;
    const int e = mesh_->triangle_edges(tri)[le];
    const int parity = mesh_->triangle_edge_parities(tri)[le];
    const double sign = (m % 2 == 0) ? double(parity) : 1.0;  // parity^(m+1)
    return {moments_per_edge_ * e + m, sign};
  }
  const int base = moments_per_edge_ * mesh_->edge_count();
  return {base + interior_per_tri_ * tri + (local - nedge), 1.0};
}

DofFunctional FESpace::dof_functional(int global) const {
  if (element_.form_order == 2)
    return {DofFunctional::Kind::CellMoment, global / interior_per_tri_,
            global % interior_per_tri_};
  const int nedge = moments_per_edge_ * mesh_->edge_count();
  if (global < nedge)
    return {DofFunctional::Kind::EdgeMoment, global / moments_per_edge_,
            global % moments_per_edge_};
  const int rest = global - nedge;
  return {DofFunctional::Kind::InteriorMoment, rest / interior_per_tri_,
          rest % interior_per_tri_};
}

void FESpace::eval_reference(const Eigen::Vector2d& ref,
                             Eigen::Matrix<double, Eigen::Dynamic, 2>& values,
                             Eigen::VectorXd& divs) const {
  flux_ref(element_).eval(ref, values, divs);
}

void FESpace::eval_reference_scalar(const Eigen::Vector2d& ref,
                                    Eigen::VectorXd& values) const {
  density_eval(interior_per_tri_, ref, values);
}

void FESpace::eval_basis(int tri, const Eigen::Vector2d& ref, BasisEval& out) const {
  check_inside_reference(ref);
  if (element_.form_order == 2) {
    density_eval(interior_per_tri_, ref, out.scalar_values);
    out.divs = Eigen::VectorXd::Zero(interior_per_tri_);
    return;
  }
  const TriangleGeometry g = mesh_->triangle_geometry(tri);
  Eigen::Matrix<double, Eigen::Dynamic, 2> rv;
  Eigen::VectorXd rd;
  flux_ref(element_).eval(ref, rv, rd);
  const int n = local_dof_count();
  out.vec_values.resize(n, 2);
  out.divs.resize(n);
  for (int j = 0; j < n; ++j) {
    const double s = local_to_global(tri, j).sign;
    out.vec_values.row(j) =
        (s / g.det) * (g.jacobian * rv.row(j).transpose()).transpose();
    out.divs(j) = s * rd(j) / g.det;
  }
}

Eigen::Vector2d FESpace::eval_vector(int tri, const Eigen::Vector2d& ref,
                                     const Eigen::VectorXd& coeffs) const {
  BasisEval b;
  eval_basis(tri, ref, b);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int j = 0; j < local_dof_count(); ++j)
    out += coeffs[local_to_global(tri, j).global] * b.vec_values.row(j).transpose();
  return out;
}

double FESpace::eval_div(int tri, const Eigen::Vector2d& ref,
                         const Eigen::VectorXd& coeffs) const {
  BasisEval b;
  eval_basis(tri, ref, b);
  double out = 0.0;
  for (int j = 0; j < local_dof_count(); ++j)
    out += coeffs[local_to_global(tri, j).global] * b.divs(j);
  return out;
}

double FESpace::eval_scalar(int tri, const Eigen::Vector2d& ref,
                            const Eigen::VectorXd& coeffs) const {
  BasisEval b;
  eval_basis(tri, ref, b);
  double out = 0.0;
  for (int j = 0; j < local_dof_count(); ++j)
    out += coeffs[local_to_global(tri, j).global] * b.scalar_values(j);
  return out;
}

//------------------------------------------------------------------------------
// Canonical interpolation
//------------------------------------------------------------------------------

Eigen::VectorXd canonical_interpolation(const FESpace& space, const VectorField& w) {
  if (space.form_order() != 1)
    throw ConfigError("vector interpolation requires a flux space");
  const SimplicialMesh& mesh = space.mesh();
  const ElementFamily fam = space.element();
  const int epm = fam == ElementFamily::raviart_thomas(0) ? 1 : 2;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.dof_count());

  // edge moments against Legendre weights in the global low->high
  // parametrization; the dof normal is that direction rotated by -90 deg
  const auto& seg = segment_rule(6);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const Eigen::Vector2d a = mesh.vertex(mesh.edge(e)[0]);
    const Eigen::Vector2d b = mesh.vertex(mesh.edge(e)[1]);
    const double len = (b - a).norm();
    const Eigen::Vector2d nu = mesh.edge_normal(e);
    for (int m = 0; m < epm; ++m) {
      double acc = 0.0;
      for (const auto& q : seg) {
        const Eigen::Vector2d x = a + q.s * (b - a);
        acc += q.w * w(x).dot(nu) * legendre01(m, q.s);
      }
      c[epm * e + m] = acc * len;
    }
  }

  if (fam == ElementFamily::raviart_thomas(1)) {
    const int base = epm * mesh.edge_count();
    const auto& rule = triangle_rule(8);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const TriangleGeometry g = mesh.triangle_geometry(t);
      const Eigen::Matrix2d jinv = g.jacobian.inverse();
      Eigen::Vector2d acc = Eigen::Vector2d::Zero();
      for (const auto& q : rule.points)
        acc += q.w * g.det * (jinv * w(g.to_physical({q.x, q.y})));
      c.segment<2>(base + 2 * t) = acc;
    }
  }
  return c;
}

Eigen::VectorXd canonical_interpolation(const FESpace& space, const ScalarField& w) {
  if (space.form_order() != 2)
    throw ConfigError("scalar interpolation requires a density space");
  const SimplicialMesh& mesh = space.mesh();
  const int nloc = space.local_dof_count();
  const Eigen::MatrixXd& minv = density_mass_inverse(nloc);
  const auto& rule = triangle_rule(8);
  Eigen::VectorXd c(space.dof_count());
  Eigen::VectorXd vals;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = mesh.triangle_geometry(t);
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(nloc);
    for (const auto& q : rule.points) {
      density_eval(nloc, {q.x, q.y}, vals);
      mom += q.w * w(g.to_physical({q.x, q.y})) * vals;
    }
    c.segment(nloc * t, nloc) = minv * mom;
  }
  return c;
}

}  // namespace feec2d
