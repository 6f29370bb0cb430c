#pragma once

// Symmetric Nitsche discretization of -Laplace-Beltrami(u) = f, u = g on the
// discrete surface:
//
//   a(v, w) = (grad v, grad w) - (nu.grad v, w)_bd - (v, nu.grad w)_bd + beta/h (v, w)_bd
//   l(w)    = (f o p, w) - (g o p_bd, nu.grad w)_bd + beta/h (g o p_bd, w)_bd
//
// with tangential gradients and conormal taken on Γ_h.

#include "surfnitsche/element_geometry.hpp"
#include "surfnitsche/error.hpp"
#include "surfnitsche/linear_solver.hpp"
#include "surfnitsche/mesh.hpp"
#include "surfnitsche/reference_element.hpp"
#include "surfnitsche/sparse.hpp"
#include "surfnitsche/surface_geometry.hpp"

#include <vector>

namespace surfnitsche {

inline constexpr double default_beta = 1e4;

struct AssemblyOptions {
  double beta = default_beta;
  /// 0 selects 2k + 2.
  int triangle_degree = 0;
  int edge_degree = 0;
  /// Penalty with each edge's own chord length instead of the global mesh h.
  bool local_h = false;
  /// Drop every boundary term (stiffness-only diagnostics).
  bool boundary_terms = true;
};

struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  double beta = default_beta;
  double h_used = 0.0;
};

template <SurfaceProblem P>
SparseSystem assemble(const ParametricMesh& mesh, const P& problem, const AssemblyOptions& options = {}) {
  if (!(options.beta > 0.0)) throw Error(ErrorKind::invalid_beta, "penalty parameter must be positive");
  const int k = mesh.order;
  const ReferenceElement ref(k, options.triangle_degree > 0 ? options.triangle_degree : 2 * k + 2,
                             options.edge_degree > 0 ? options.edge_degree : 2 * k + 2);
  const int npe = ref.size();
  const int n = mesh.num_nodes();

  SparseSystem sys;
  sys.beta = options.beta;
  sys.h_used = mesh.h;
  sys.rhs.assign(n, 0.0);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * npe * npe);

  std::vector<double> local(static_cast<std::size_t>(npe) * npe);
  std::vector<double> local_rhs(npe);
  std::vector<Vec3> grad(npe);
  std::vector<double> flux(npe);

  const auto scatter = [&](std::span<const int> conn) {
    for (int i = 0; i < npe; ++i) {
      sys.rhs[conn[i]] += local_rhs[i];
      for (int j = 0; j < npe; ++j) triplets.push_back({conn[i], conn[j], local[i * npe + j]});
    }
  };

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = gather_nodes(mesh, e);
    const std::span<const Vec3> view(nodes);
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    for (std::size_t qp = 0; qp < ref.cell_rule().size(); ++qp) {
      const auto& basis = ref.cell_table(qp);
      const auto frame = element_frame(view, basis, problem);
      const Mat32 map = gradient_map(frame);
      const double dx = ref.cell_rule().weights[qp] * frame.area_factor;
      for (int i = 0; i < npe; ++i) grad[i] = map * basis.gradients[i];
      const double f = problem.load(frame.x);
      for (int i = 0; i < npe; ++i) {
        local_rhs[i] += dx * f * basis.values[i];
        for (int j = 0; j < npe; ++j) local[i * npe + j] += dx * grad[i].dot(grad[j]);
      }
    }
    scatter(mesh.element(e));
  }

  if (options.boundary_terms) {
    const auto& lattice = ref.lattice();
    for (const auto& be : mesh.boundary_edges) {
      const auto nodes = gather_nodes(mesh, be.element);
      const std::span<const Vec3> view(nodes);
      const Vec3 interior = edge_interior_direction(view, lattice, be.local_edge);
      double h = mesh.h;
      if (options.local_h) {
        h = (nodes[lattice.vertex((be.local_edge + 1) % 3)] - nodes[lattice.vertex(be.local_edge)]).norm();
      }
      const double penalty = options.beta / h;
      std::fill(local.begin(), local.end(), 0.0);
      std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
      for (std::size_t qp = 0; qp < ref.edge_rule_1d().size(); ++qp) {
        const auto& basis = ref.edge_table(be.local_edge, qp);
        const auto bp = boundary_conormal(view, be.local_edge, basis, problem, interior);
        const Mat32 map = gradient_map(bp.frame);
        const double ds = ref.edge_rule_1d().weights[qp] * bp.line_factor;
        for (int i = 0; i < npe; ++i) flux[i] = bp.conormal.dot(map * basis.gradients[i]);
        const double g = problem.dirichlet(problem.project_to_boundary(bp.x, be.side));
        const auto& phi = basis.values;
        for (int i = 0; i < npe; ++i) {
          local_rhs[i] += ds * g * (penalty * phi[i] - flux[i]);
          for (int j = 0; j < npe; ++j) {
            local[i * npe + j] += ds * (penalty * (phi[i] * phi[j]) - (flux[j] * phi[i] + flux[i] * phi[j]));
          }
        }
      }
      scatter(mesh.element(be.element));
    }
  }

  sys.matrix = CsrMatrix::from_triplets(n, n, std::move(triplets));
  return sys;
}

struct BetaProbeEntry {
  double beta;
  bool positive_definite;
};

/// Cholesky-based positive-definiteness probe over a grid of penalties.
template <SurfaceProblem P>
std::vector<BetaProbeEntry> min_stable_beta_probe(const ParametricMesh& mesh, const P& problem,
                                                  std::span<const double> beta_grid,
                                                  AssemblyOptions options = {}) {
  if (beta_grid.empty()) throw Error(ErrorKind::invalid_argument, "empty beta grid");
  std::vector<BetaProbeEntry> out;
  for (double beta : beta_grid) {
    options.beta = beta;
    const auto sys = assemble(mesh, problem, options);
    out.push_back({beta, band_cholesky_succeeds(sys.matrix)});
  }
  return out;
}

}  // namespace surfnitsche
