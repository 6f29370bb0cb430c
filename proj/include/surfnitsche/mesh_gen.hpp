#pragma once

// Structured construction of the order-k parametric surface mesh and the
// geometric approximation report.
//
// The vertex grid lives on the (a, s) parameter rectangle of the problem's
// chart. Lagrange nodes sit on the k-refined grid, so a node is identified by
// its refined integer coordinates and shared edges get identical node ids.
// Construction order: facet interpolation -> closest-point snap -> boundary
// nodes projected onto the exact boundary -> interior nodes of boundary
// elements displaced by the blended edge correction -> re-snap of those.

#include "surfnitsche/element_geometry.hpp"
#include "surfnitsche/error.hpp"
#include "surfnitsche/mesh.hpp"
#include "surfnitsche/reference_element.hpp"
#include "surfnitsche/surface_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace surfnitsche {

struct MeshOptions {
  /// Apply the boundary correction (steps d/e). Off only for diagnostics.
  bool correct_boundary = true;
  /// Blend the boundary correction into element-interior nodes.
  bool blend_interior = true;
  /// Quadrature degree of the Jacobian validity check; 0 means 2k + 2.
  int check_degree = 0;
};

namespace detail {

/// Degree-k Lagrange interpolation of equispaced samples on [0, 1].
inline Vec3 interpolate_equispaced(std::span<const Vec3> samples, double t) {
  const int k = static_cast<int>(samples.size()) - 1;
  Vec3 out = Vec3::Zero();
  for (int j = 0; j <= k; ++j) {
    double l = 1.0;
    for (int m = 0; m <= k; ++m) {
      if (m != j) l *= (k * t - m) / static_cast<double>(j - m);
    }
    out += l * samples[j];
  }
  return out;
}

}  // namespace detail

template <SurfaceProblem P>
ParametricMesh build_mesh(int n_div, int k, const P& problem, const MeshOptions& options = {}) {
  if (n_div < 2) throw Error(ErrorKind::invalid_argument, "n_div must be at least 2");
  if (k < 1 || k > max_order) throw Error(ErrorKind::unsupported_degree, "order k must be in [1, 3]");

  const LagrangeLattice lattice(k);
  const int na = problem.cells_around(n_div);
  const int ns = problem.cells_across(n_div);
  const bool periodic = problem.periodic();
  const int nodes_around = periodic ? k * na : k * na + 1;
  const int nodes_across = k * ns + 1;

  ParametricMesh mesh;
  mesh.order = k;
  mesh.cells_around = na;
  mesh.cells_across = ns;
  mesh.periodic = periodic;
  mesh.nodes.assign(static_cast<std::size_t>(nodes_around) * nodes_across, Vec3::Zero());
  mesh.node_side.assign(mesh.nodes.size(), -1);
  std::vector<char> placed(mesh.nodes.size(), 0);

  const auto node_id = [&](int i, int j) {
    if (periodic) i = ((i % nodes_around) + nodes_around) % nodes_around;
    return j * nodes_around + i;
  };

  // vertex positions, indexed with periodic identification
  const int vertices_around = periodic ? na : na + 1;
  std::vector<Vec3> vertex(static_cast<std::size_t>(vertices_around) * (ns + 1));
  for (int j = 0; j <= ns; ++j) {
    for (int i = 0; i < vertices_around; ++i) {
      vertex[j * vertices_around + i] =
          problem.chart(static_cast<double>(i) / na, static_cast<double>(j) / ns);
    }
  }
  const auto vertex_at = [&](int i, int j) -> const Vec3& {
    if (periodic) i %= na;
    return vertex[j * vertices_around + i];
  };

  const auto side_of_node = [&](int i, int j) -> int {
    if (j == 0 && problem.is_boundary(BoundarySide::lower)) return static_cast<int>(BoundarySide::lower);
    if (j == nodes_across - 1 && problem.is_boundary(BoundarySide::upper)) {
      return static_cast<int>(BoundarySide::upper);
    }
    if (!periodic && i == 0 && problem.is_boundary(BoundarySide::left)) {
      return static_cast<int>(BoundarySide::left);
    }
    if (!periodic && i == k * na && problem.is_boundary(BoundarySide::right)) {
      return static_cast<int>(BoundarySide::right);
    }
    return -1;
  };

  const auto edge_side = [&](const std::array<int, 2>& a, const std::array<int, 2>& b) -> std::optional<BoundarySide> {
    if (a[1] == 0 && b[1] == 0 && problem.is_boundary(BoundarySide::lower)) return BoundarySide::lower;
    if (a[1] == ns && b[1] == ns && problem.is_boundary(BoundarySide::upper)) return BoundarySide::upper;
    if (!periodic && a[0] == 0 && b[0] == 0 && problem.is_boundary(BoundarySide::left)) return BoundarySide::left;
    if (!periodic && a[0] == na && b[0] == na && problem.is_boundary(BoundarySide::right)) {
      return BoundarySide::right;
    }
    return std::nullopt;
  };

  const int npe = lattice.size();
  mesh.connectivity.reserve(static_cast<std::size_t>(2) * na * ns * npe);
  double h = 0.0;

  for (int j = 0; j < ns; ++j) {
    for (int i = 0; i < na; ++i) {
      const std::array<std::array<int, 2>, 4> corner{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      // split along the shorter diagonal; rows next to a wavy boundary are sheared
      const double d02 = (vertex_at(i, j) - vertex_at(i + 1, j + 1)).norm();
      const double d13 = (vertex_at(i + 1, j) - vertex_at(i, j + 1)).norm();
      // h is taken over cell sides; the diagonal choice would make it jump between levels
      for (int c = 0; c < 4; ++c) {
        const auto& a = corner[c];
        const auto& b = corner[(c + 1) % 4];
        h = std::max(h, (vertex_at(a[0], a[1]) - vertex_at(b[0], b[1])).norm());
      }
      const std::array<std::array<int, 3>, 2> split =
          d02 <= d13 ? std::array<std::array<int, 3>, 2>{{{0, 1, 2}, {0, 2, 3}}}
                     : std::array<std::array<int, 3>, 2>{{{0, 1, 3}, {1, 2, 3}}};
      for (const auto& tri : split) {
        std::array<std::array<int, 2>, 3> v{corner[tri[0]], corner[tri[1]], corner[tri[2]]};
        std::array<Vec3, 3> X{vertex_at(v[0][0], v[0][1]), vertex_at(v[1][0], v[1][1]),
                              vertex_at(v[2][0], v[2][1])};
        const Vec3 centroid = (X[0] + X[1] + X[2]) / 3.0;
        if ((X[1] - X[0]).cross(X[2] - X[0]).dot(problem.normal(centroid)) < 0.0) {
          std::swap(v[1], v[2]);
          std::swap(X[1], X[2]);
        }
        const int element = mesh.num_elements();
        for (int n = 0; n < npe; ++n) {
          const auto [p, q] = lattice.lattice(n);
          const int gi = k * v[0][0] + p * (v[1][0] - v[0][0]) + q * (v[2][0] - v[0][0]);
          const int gj = k * v[0][1] + p * (v[1][1] - v[0][1]) + q * (v[2][1] - v[0][1]);
          const int id = node_id(gi, gj);
          mesh.connectivity.push_back(id);
          if (placed[id]) continue;
          placed[id] = 1;
          mesh.node_side[id] = side_of_node(periodic ? ((gi % nodes_around) + nodes_around) % nodes_around : gi, gj);
          if ((p == 0 && q == 0) || (p == k && q == 0) || (p == 0 && q == k)) {
            mesh.nodes[id] = p == k ? X[1] : (q == k ? X[2] : X[0]);
          } else {
            const double l1 = static_cast<double>(p) / k, l2 = static_cast<double>(q) / k;
            mesh.nodes[id] = problem.closest_point((1.0 - l1 - l2) * X[0] + l1 * X[1] + l2 * X[2]);
          }
        }
        for (int e = 0; e < 3; ++e) {
          if (auto side = edge_side(v[e], v[(e + 1) % 3])) mesh.boundary_edges.push_back({element, e, *side});
        }
      }
    }
  }
  mesh.h = h;

  if (options.correct_boundary) {
    std::vector<Vec3> displacement(mesh.nodes.size(), Vec3::Zero());
    for (std::size_t id = 0; id < mesh.nodes.size(); ++id) {
      if (mesh.node_side[id] < 0) continue;
      const Vec3 target = problem.boundary_correction(mesh.nodes[id], static_cast<BoundarySide>(mesh.node_side[id]));
      displacement[id] = target - mesh.nodes[id];
      mesh.nodes[id] = target;
    }

    // Interior lattice nodes of a boundary element move by (1 - d)^2 times the
    // edge correction interpolated at their projection onto the boundary edge,
    // d being the barycentric distance from that edge.
    if (options.blend_interior && k >= 3) {
      std::vector<int> touched;
      for (const auto& be : mesh.boundary_edges) {
        const auto conn = mesh.element(be.element);
        std::vector<Vec3> edge_disp;
        for (int n : lattice.edge_nodes(be.local_edge)) edge_disp.push_back(displacement[conn[n]]);
        const int a = be.local_edge, b = (be.local_edge + 1) % 3;
        for (int n = 0; n < npe; ++n) {
          const auto [p, q] = lattice.lattice(n);
          if (p == 0 || q == 0 || p + q == k) continue;
          const std::array<double, 3> lambda{static_cast<double>(k - p - q) / k, static_cast<double>(p) / k,
                                             static_cast<double>(q) / k};
          const double d = lambda[LagrangeLattice::opposite_vertex(be.local_edge)];
          const double t = lambda[b] / (lambda[a] + lambda[b]);
          mesh.nodes[conn[n]] += (1.0 - d) * (1.0 - d) * detail::interpolate_equispaced(edge_disp, t);
          touched.push_back(conn[n]);
        }
      }
      for (int id : touched) mesh.nodes[id] = problem.closest_point(mesh.nodes[id]);
    }
  }

  // validity: positive oriented Jacobian at every check point
  const ReferenceElement check(k, options.check_degree > 0 ? options.check_degree : 2 * k + 2, 1);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = gather_nodes(mesh, e);
    for (std::size_t qp = 0; qp < check.cell_rule().size(); ++qp) {
      double orientation = 0.0;
      try {
        orientation = element_frame(std::span<const Vec3>(nodes), check.cell_table(qp), problem).orientation;
      } catch (const Error&) {
        orientation = 0.0;
      }
      if (!(orientation > 0.0)) {
        throw Error(ErrorKind::mesh_invalid, "element " + std::to_string(e) + " has a nonpositive Jacobian");
      }
    }
  }
  return mesh;
}

/// Geometric approximation quantities of a mesh against the exact surface.
struct GeometricReport {
  double max_rho = 0.0;
  double max_normal_dev = 0.0;
  /// At edge quadrature points of the discrete boundary.
  double max_boundary_dist = 0.0;
  /// At the mesh nodes lying on the discrete boundary.
  double max_boundary_node_dist = 0.0;
  double max_conormal_dev = 0.0;
  /// min over quadrature points of area_factor / (2 * straight-facet area).
  double min_scaled_jacobian = std::numeric_limits<double>::infinity();
};

template <SurfaceProblem P>
GeometricReport geometric_report(const ParametricMesh& mesh, const P& problem, int degree = 0) {
  const int k = mesh.order;
  const int deg = degree > 0 ? degree : 2 * k + 2;
  const ReferenceElement ref(k, deg, deg);
  const auto& lattice = ref.lattice();
  GeometricReport report;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = gather_nodes(mesh, e);
    const std::span<const Vec3> view(nodes);
    const Vec3& x0 = nodes[lattice.vertex(0)];
    const double straight = (nodes[lattice.vertex(1)] - x0).cross(nodes[lattice.vertex(2)] - x0).norm();
    for (std::size_t qp = 0; qp < ref.cell_rule().size(); ++qp) {
      const auto f = element_frame(view, ref.cell_table(qp), problem);
      report.max_rho = std::max(report.max_rho, std::abs(problem.signed_distance(f.x)));
      report.max_normal_dev = std::max(report.max_normal_dev, (problem.normal(f.x) - f.normal).norm());
      report.min_scaled_jacobian = std::min(report.min_scaled_jacobian, std::copysign(f.area_factor, f.orientation) / straight);
    }
  }

  for (const auto& be : mesh.boundary_edges) {
    const auto nodes = gather_nodes(mesh, be.element);
    const std::span<const Vec3> view(nodes);
    const Vec3 interior = edge_interior_direction(view, lattice, be.local_edge);
    for (std::size_t qp = 0; qp < ref.edge_rule_1d().size(); ++qp) {
      const auto bp = boundary_conormal(view, be.local_edge, ref.edge_table(be.local_edge, qp), problem, interior);
      const Vec3 target = problem.project_to_boundary(bp.x, be.side);
      report.max_boundary_dist = std::max(report.max_boundary_dist, (target - bp.x).norm());
      report.max_conormal_dev =
          std::max(report.max_conormal_dev, (problem.boundary_conormal(bp.x, be.side) - bp.conormal).norm());
    }
  }

  for (int id = 0; id < mesh.num_nodes(); ++id) {
    if (mesh.node_side[id] < 0) continue;
    const Vec3 target = problem.project_to_boundary(mesh.nodes[id], static_cast<BoundarySide>(mesh.node_side[id]));
    report.max_boundary_node_dist = std::max(report.max_boundary_node_dist, (target - mesh.nodes[id]).norm());
  }
  return report;
}

}  // namespace surfnitsche
