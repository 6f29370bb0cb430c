#pragma once

#include "surfnitsche/error.hpp"
#include "surfnitsche/quadrature.hpp"
#include "surfnitsche/types.hpp"

#include <array>
#include <vector>

namespace surfnitsche {

inline constexpr int max_order = 3;

inline int nodes_per_element(int k) { return (k + 1) * (k + 2) / 2; }

/// Lattice point (p, q) -> (p/k, q/k); nodes are ordered row by row in q,
/// then by p. Local vertices are (0,0), (k,0), (0,k). Local edge e runs from
/// vertex e to vertex (e+1) mod 3.
class LagrangeLattice {
 public:
  explicit LagrangeLattice(int k) : k_(k) {
    if (k < 1 || k > max_order) {
      throw Error(ErrorKind::unsupported_degree, "Lagrange order must be in [1, 3]");
    }
    for (int q = 0; q <= k; ++q) {
      for (int p = 0; p <= k - q; ++p) lattice_.push_back({p, q});
    }
  }

  [[nodiscard]] int order() const { return k_; }
  [[nodiscard]] int size() const { return static_cast<int>(lattice_.size()); }
  [[nodiscard]] std::array<int, 2> lattice(int i) const { return lattice_[i]; }
  [[nodiscard]] Vec2 point(int i) const {
    return {static_cast<double>(lattice_[i][0]) / k_, static_cast<double>(lattice_[i][1]) / k_};
  }

  [[nodiscard]] int index(int p, int q) const {
    // rows q' < q contribute (k+1-q') entries each
    int offset = 0;
    for (int r = 0; r < q; ++r) offset += k_ + 1 - r;
    return offset + p;
  }

  [[nodiscard]] int vertex(int v) const {
    switch (v) {
      case 0: return index(0, 0);
      case 1: return index(k_, 0);
      default: return index(0, k_);
    }
  }

  /// The k+1 nodes of local edge e, ordered from its first to its second vertex.
  [[nodiscard]] std::vector<int> edge_nodes(int e) const {
    std::vector<int> out;
    for (int j = 0; j <= k_; ++j) {
      switch (e) {
        case 0: out.push_back(index(j, 0)); break;
        case 1: out.push_back(index(k_ - j, j)); break;
        default: out.push_back(index(0, k_ - j)); break;
      }
    }
    return out;
  }

  /// Reference point on local edge e at edge parameter t in [0, 1].
  static Vec2 edge_point(int e, double t) {
    switch (e) {
      case 0: return {t, 0.0};
      case 1: return {1.0 - t, t};
      default: return {0.0, 1.0 - t};
    }
  }
  /// d(reference point)/dt along local edge e.
  static Vec2 edge_direction(int e) {
    switch (e) {
      case 0: return {1.0, 0.0};
      case 1: return {-1.0, 1.0};
      default: return {0.0, -1.0};
    }
  }
  static int opposite_vertex(int e) { return (e + 2) % 3; }
  static Vec2 vertex_point(int v) {
    switch (v) {
      case 0: return {0.0, 0.0};
      case 1: return {1.0, 0.0};
      default: return {0.0, 1.0};
    }
  }

 private:
  int k_;
  std::vector<std::array<int, 2>> lattice_;
};

struct BasisValues {
  std::vector<double> values;
  std::vector<Vec2> gradients;
};

namespace detail {

// Silvester factor P_m(lambda) = prod_{s<m} (k lambda - s) / (s + 1) and its derivative.
inline void silvester(int k, int m, double lambda, double& value, double& derivative) {
  value = 1.0;
  derivative = 0.0;
  for (int s = 0; s < m; ++s) {
    const double f = (k * lambda - s) / (s + 1);
    const double df = static_cast<double>(k) / (s + 1);
    derivative = derivative * f + value * df;
    value *= f;
  }
}

}  // namespace detail

/// Nodal Lagrange basis of order k and its reference gradients at a point.
inline BasisValues basis_eval(const LagrangeLattice& lattice, const Vec2& xi) {
  const int k = lattice.order();
  const double l0 = 1.0 - xi.x() - xi.y();
  BasisValues out;
  out.values.resize(lattice.size());
  out.gradients.resize(lattice.size());
  for (int i = 0; i < lattice.size(); ++i) {
    const auto [p, q] = lattice.lattice(i);
    double v0, d0, v1, d1, v2, d2;
    detail::silvester(k, k - p - q, l0, v0, d0);
    detail::silvester(k, p, xi.x(), v1, d1);
    detail::silvester(k, q, xi.y(), v2, d2);
    out.values[i] = v0 * v1 * v2;
    out.gradients[i] = Vec2{-d0 * v1 * v2 + v0 * d1 * v2, -d0 * v1 * v2 + v0 * v1 * d2};
  }
  return out;
}

inline BasisValues basis_eval(int k, const Vec2& xi) { return basis_eval(LagrangeLattice(k), xi); }

/// Basis tables of one order at the points of a triangle rule and of an edge
/// rule mapped onto each of the three local edges.
class ReferenceElement {
 public:
  ReferenceElement(int k, int triangle_degree, int edge_degree)
      : lattice_(k), triangle_(triangle_rule(triangle_degree)), edge_(edge_rule(edge_degree)) {
    for (const auto& xi : triangle_.points) cell_tables_.push_back(basis_eval(lattice_, xi));
    for (int e = 0; e < 3; ++e) {
      for (const auto& t : edge_.points) {
        edge_tables_[e].push_back(basis_eval(lattice_, LagrangeLattice::edge_point(e, t.x())));
      }
    }
  }

  [[nodiscard]] int order() const { return lattice_.order(); }
  [[nodiscard]] const LagrangeLattice& lattice() const { return lattice_; }
  [[nodiscard]] int size() const { return lattice_.size(); }
  [[nodiscard]] const QuadratureRule& cell_rule() const { return triangle_; }
  [[nodiscard]] const QuadratureRule& edge_rule_1d() const { return edge_; }
  [[nodiscard]] const BasisValues& cell_table(std::size_t q) const { return cell_tables_[q]; }
  [[nodiscard]] const BasisValues& edge_table(int e, std::size_t q) const { return edge_tables_[e][q]; }

 private:
  LagrangeLattice lattice_;
  QuadratureRule triangle_;
  QuadratureRule edge_;
  std::vector<BasisValues> cell_tables_;
  std::array<std::vector<BasisValues>, 3> edge_tables_;
};

}  // namespace surfnitsche
