#pragma once

// Per-element differential geometry of the discrete surface: the parametric
// map F_K, its Jacobian and metric, the discrete normal, tangential gradients
// and the boundary conormal.

#include "surfnitsche/error.hpp"
#include "surfnitsche/mesh.hpp"
#include "surfnitsche/reference_element.hpp"
#include "surfnitsche/surface_geometry.hpp"

#include <cmath>
#include <span>

namespace surfnitsche {

struct ElementFrame {
  Vec3 x = Vec3::Zero();
  Mat32 jacobian = Mat32::Zero();
  Mat2 metric = Mat2::Zero();
  double area_factor = 0.0;
  Vec3 normal = Vec3::Zero();
  /// (J_xi x J_eta) . (n o p) / |J_xi x J_eta|; negative means F_K is
  /// folded relative to the exact surface orientation.
  double orientation = 0.0;
};

/// Frame from nodal coordinates and precomputed basis values.
template <SurfaceProblem P>
ElementFrame element_frame(std::span<const Vec3> element_nodes, const BasisValues& basis,
                           const P& problem) {
  ElementFrame f;
  for (std::size_t i = 0; i < element_nodes.size(); ++i) {
    f.x += basis.values[i] * element_nodes[i];
    f.jacobian.col(0) += basis.gradients[i].x() * element_nodes[i];
    f.jacobian.col(1) += basis.gradients[i].y() * element_nodes[i];
  }
  f.metric = f.jacobian.transpose() * f.jacobian;
  const Vec3 cross = f.jacobian.col(0).cross(f.jacobian.col(1));
  f.area_factor = cross.norm();
  if (!(f.area_factor > 0.0) || !std::isfinite(f.area_factor)) {
    throw Error(ErrorKind::degenerate_element, "vanishing area factor");
  }
  f.normal = cross / f.area_factor;
  f.orientation = f.normal.dot(problem.normal(f.x));
  if (f.orientation < 0.0) f.normal = -f.normal;
  return f;
}

inline std::vector<Vec3> gather_nodes(const ParametricMesh& mesh, int element) {
  std::vector<Vec3> out;
  out.reserve(mesh.nodes_per_element());
  for (int n : mesh.element(element)) out.push_back(mesh.nodes[n]);
  return out;
}

template <SurfaceProblem P>
ElementFrame element_frame(const ParametricMesh& mesh, int element, const Vec2& xi, const P& problem) {
  const auto nodes = gather_nodes(mesh, element);
  return element_frame(std::span<const Vec3>(nodes), basis_eval(mesh.order, xi), problem);
}

/// J G^{-1}: maps a reference gradient to the tangential gradient on Γ_h.
inline Mat32 gradient_map(const ElementFrame& frame) {
  const double det = frame.metric.determinant();
  if (!(det > 0.0)) throw Error(ErrorKind::singular_metric, "first fundamental form not invertible");
  return frame.jacobian * frame.metric.inverse();
}

inline Vec3 tangent_gradient(const ElementFrame& frame, std::span<const Vec2> ref_gradients,
                             std::span<const double> coeffs) {
  Vec2 g = Vec2::Zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i) g += coeffs[i] * ref_gradients[i];
  return gradient_map(frame) * g;
}

struct BoundaryPoint {
  Vec3 x = Vec3::Zero();
  Vec3 conormal = Vec3::Zero();
  double line_factor = 0.0;
  ElementFrame frame;
};

/// Vector from the image of the edge midpoint to the opposite vertex.
inline Vec3 edge_interior_direction(std::span<const Vec3> element_nodes, const LagrangeLattice& lattice,
                                    int local_edge) {
  const Vec3& opposite = element_nodes[lattice.vertex(LagrangeLattice::opposite_vertex(local_edge))];
  const BasisValues mid = basis_eval(lattice, LagrangeLattice::edge_point(local_edge, 0.5));
  Vec3 midpoint = Vec3::Zero();
  for (std::size_t i = 0; i < element_nodes.size(); ++i) midpoint += mid.values[i] * element_nodes[i];
  return opposite - midpoint;
}

/// Boundary point, exterior conormal and arc-length factor on a boundary
/// edge. `basis` must be evaluated at the reference point of the edge.
template <SurfaceProblem P>
BoundaryPoint boundary_conormal(std::span<const Vec3> element_nodes, int local_edge,
                                const BasisValues& basis, const P& problem,
                                const Vec3& interior_direction) {
  BoundaryPoint out;
  out.frame = element_frame(element_nodes, basis, problem);
  out.x = out.frame.x;
  const Vec3 dx = out.frame.jacobian * LagrangeLattice::edge_direction(local_edge);
  out.line_factor = dx.norm();
  if (!(out.line_factor > 0.0)) throw Error(ErrorKind::degenerate_edge, "zero-length edge tangent");
  Vec3 nu = (dx / out.line_factor).cross(out.frame.normal);
  Vec3 inward = interior_direction - interior_direction.dot(out.frame.normal) * out.frame.normal;
  if (nu.dot(inward) > 0.0) nu = -nu;
  out.conormal = nu;
  return out;
}

template <SurfaceProblem P>
BoundaryPoint boundary_conormal(const ParametricMesh& mesh, const BoundaryEdge& edge, double t,
                                const P& problem) {
  const auto nodes = gather_nodes(mesh, edge.element);
  const LagrangeLattice lattice(mesh.order);
  const std::span<const Vec3> view(nodes);
  return boundary_conormal(view, edge.local_edge,
                           basis_eval(lattice, LagrangeLattice::edge_point(edge.local_edge, t)), problem,
                           edge_interior_direction(view, lattice, edge.local_edge));
}

}  // namespace surfnitsche
