#pragma once

#include "surfnitsche/reference_element.hpp"
#include "surfnitsche/types.hpp"

#include <span>
#include <vector>

namespace surfnitsche {

struct BoundaryEdge {
  int element = 0;
  int local_edge = 0;
  BoundarySide side = BoundarySide::lower;
};

/// Order-k isoparametric triangle mesh. Geometry nodes and degrees of freedom
/// coincide. Element connectivity follows LagrangeLattice ordering.
struct ParametricMesh {
  int order = 1;
  std::vector<Vec3> nodes;
  std::vector<int> connectivity;  // nodes_per_element(order) entries per element
  std::vector<BoundaryEdge> boundary_edges;
  /// Boundary chain each node lies on, or -1 for interior nodes.
  std::vector<int> node_side;
  /// Longest straight side of the structured vertex grid cells.
  double h = 0.0;

  // structured-grid bookkeeping
  int cells_around = 0;
  int cells_across = 0;
  bool periodic = false;

  [[nodiscard]] int nodes_per_element() const { return surfnitsche::nodes_per_element(order); }
  [[nodiscard]] int num_elements() const {
    return static_cast<int>(connectivity.size()) / nodes_per_element();
  }
  [[nodiscard]] int num_nodes() const { return static_cast<int>(nodes.size()); }
  [[nodiscard]] std::span<const int> element(int e) const {
    const auto n = static_cast<std::size_t>(nodes_per_element());
    return std::span<const int>(connectivity).subspan(static_cast<std::size_t>(e) * n, n);
  }
  [[nodiscard]] std::vector<int> element_vertices(int e) const {
    const LagrangeLattice lattice(order);
    const auto nodes_of = element(e);
    return {nodes_of[lattice.vertex(0)], nodes_of[lattice.vertex(1)], nodes_of[lattice.vertex(2)]};
  }
};

}  // namespace surfnitsche
