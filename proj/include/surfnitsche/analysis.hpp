#pragma once

// Discrete error norms against the extended exact solution u o p and
// refinement studies with estimated orders of convergence.

#include "surfnitsche/assembly.hpp"
#include "surfnitsche/element_geometry.hpp"
#include "surfnitsche/error.hpp"
#include "surfnitsche/linear_solver.hpp"
#include "surfnitsche/mesh_gen.hpp"
#include "surfnitsche/reference_element.hpp"
#include "surfnitsche/surface_geometry.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace surfnitsche {

enum class GradientMode { analytic, finite_difference };

/// Tangential gradient on Γ_h of xi -> u(p(F_K(xi))) at a reference point.
template <SurfaceProblem P>
Vec3 extension_tangent_gradient(std::span<const Vec3> element_nodes, const ElementFrame& frame,
                                const Vec2& xi, const P& problem, GradientMode mode) {
  const Mat32 map = gradient_map(frame);
  if (mode == GradientMode::analytic) {
    return map * (frame.jacobian.transpose() * problem.solution_gradient(frame.x));
  }
  constexpr double step = 1e-6;
  const int k = static_cast<int>(std::lround((std::sqrt(8.0 * element_nodes.size() + 1.0) - 3.0) / 2.0));
  const LagrangeLattice lattice(k);
  const auto u_at = [&](const Vec2& at) {
    const auto basis = basis_eval(lattice, at);
    Vec3 x = Vec3::Zero();
    for (std::size_t i = 0; i < element_nodes.size(); ++i) x += basis.values[i] * element_nodes[i];
    return problem.solution(x);
  };
  const Vec2 ex{step, 0.0}, ey{0.0, step};
  const Vec2 ref_grad{(u_at(xi + ex) - u_at(xi - ex)) / (2.0 * step), (u_at(xi + ey) - u_at(xi - ey)) / (2.0 * step)};
  return map * ref_grad;
}

struct ErrorMeasures {
  double l2_error = 0.0;
  double energy_error = 0.0;
  /// ||grad_h e||^2 over Γ_h
  double grad_part = 0.0;
  /// h ||nu_h . grad_h e||^2 over the discrete boundary
  double flux_part = 0.0;
  /// h^{-1} ||e||^2 over the discrete boundary
  double jump_part = 0.0;
  /// ||u_h - g o p_bd|| over the discrete boundary
  double boundary_mismatch = 0.0;
};

struct ErrorOptions {
  /// 0 selects 2k + 4.
  int degree = 0;
  GradientMode gradient = GradientMode::analytic;
  /// 0 selects mesh.h
  double h = 0.0;
};

namespace detail {

/// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + c; }
};

}  // namespace detail

template <SurfaceProblem P>
ErrorMeasures error_measures(const ParametricMesh& mesh, std::span<const double> uh, const P& problem,
                             const ErrorOptions& options = {}) {
  if (static_cast<int>(uh.size()) != mesh.num_nodes()) {
    throw Error(ErrorKind::invalid_argument, "coefficient vector does not match mesh nodes");
  }
  const int k = mesh.order;
  const int degree = options.degree > 0 ? options.degree : 2 * k + 4;
  const double h = options.h > 0.0 ? options.h : mesh.h;
  const ReferenceElement ref(k, degree, degree);
  const int npe = ref.size();
  std::vector<double> coeffs(npe);
  std::vector<Vec2> ref_grads(npe);

  detail::CompensatedSum l2, grad, flux, jump, mismatch;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = gather_nodes(mesh, e);
    const std::span<const Vec3> view(nodes);
    const auto conn = mesh.element(e);
    for (int i = 0; i < npe; ++i) coeffs[i] = uh[conn[i]];
    for (std::size_t qp = 0; qp < ref.cell_rule().size(); ++qp) {
      const auto& basis = ref.cell_table(qp);
      const auto frame = element_frame(view, basis, problem);
      double value = 0.0;
      for (int i = 0; i < npe; ++i) value += coeffs[i] * basis.values[i];
      const Vec3 grad_h = tangent_gradient(frame, basis.gradients, coeffs);
      const Vec3 grad_e =
          extension_tangent_gradient(view, frame, ref.cell_rule().points[qp], problem, options.gradient);
      const double dx = ref.cell_rule().weights[qp] * frame.area_factor;
      const double err = problem.solution(frame.x) - value;
      l2.add(dx * err * err);
      grad.add(dx * (grad_e - grad_h).squaredNorm());
    }
  }

  const auto& lattice = ref.lattice();
  for (const auto& be : mesh.boundary_edges) {
    const auto nodes = gather_nodes(mesh, be.element);
    const std::span<const Vec3> view(nodes);
    const auto conn = mesh.element(be.element);
    for (int i = 0; i < npe; ++i) coeffs[i] = uh[conn[i]];
    const Vec3 interior = edge_interior_direction(view, lattice, be.local_edge);
    for (std::size_t qp = 0; qp < ref.edge_rule_1d().size(); ++qp) {
      const auto& basis = ref.edge_table(be.local_edge, qp);
      const auto bp = boundary_conormal(view, be.local_edge, basis, problem, interior);
      double value = 0.0;
      for (int i = 0; i < npe; ++i) value += coeffs[i] * basis.values[i];
      const Vec2 xi = LagrangeLattice::edge_point(be.local_edge, ref.edge_rule_1d().points[qp].x());
      const Vec3 grad_h = tangent_gradient(bp.frame, basis.gradients, coeffs);
      const Vec3 grad_e = extension_tangent_gradient(view, bp.frame, xi, problem, options.gradient);
      const double ds = ref.edge_rule_1d().weights[qp] * bp.line_factor;
      const double err = problem.solution(bp.x) - value;
      const double dn = bp.conormal.dot(grad_e - grad_h);
      flux.add(ds * h * dn * dn);
      jump.add(ds * err * err / h);
      const double miss = value - problem.dirichlet(problem.project_to_boundary(bp.x, be.side));
      mismatch.add(ds * miss * miss);
    }
  }

  ErrorMeasures m;
  m.grad_part = grad.value();
  m.flux_part = flux.value();
  m.jump_part = jump.value();
  m.l2_error = std::sqrt(l2.value());
  m.energy_error = std::sqrt(m.grad_part + m.flux_part + m.jump_part);
  m.boundary_mismatch = std::sqrt(mismatch.value());
  return m;
}

/// Nodal values of u o p.
template <SurfaceProblem P>
std::vector<double> interpolate_solution(const ParametricMesh& mesh, const P& problem) {
  std::vector<double> out(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) out[i] = problem.solution(mesh.nodes[i]);
  return out;
}

struct ConvergenceRecord {
  int k = 1;
  int level = 0;
  int n_div = 0;
  double h = 0.0;
  int dof = 0;
  double l2_error = 0.0;
  double energy_error = 0.0;
  /// NaN on the first level.
  double eoc_l2 = std::numeric_limits<double>::quiet_NaN();
  double eoc_energy = std::numeric_limits<double>::quiet_NaN();
  ErrorMeasures errors;
  int solver_iterations = 0;
  double solver_residual = 0.0;
  std::optional<GeometricReport> geometry;
};

struct StudyOptions {
  int base_divisions = 8;
  AssemblyOptions assembly{};
  SolveOptions solver{};
  ErrorOptions errors{};
  MeshOptions mesh{};
  bool geometry_report = false;
};

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

struct SolveResult {
  ParametricMesh mesh;
  SparseSystem system;
  SolveReport solve;
};

template <SurfaceProblem P>
SolveResult solve_problem(int n_div, int k, const P& problem, const StudyOptions& options = {}) {
  SolveResult out;
  out.mesh = build_mesh(n_div, k, problem, options.mesh);
  out.system = assemble(out.mesh, problem, options.assembly);
  out.solve = solve_spd(out.system.matrix, out.system.rhs, options.solver);
  return out;
}

template <SurfaceProblem P>
std::vector<ConvergenceRecord> convergence_study(int k, int levels, const P& problem,
                                                 const StudyOptions& options = {}) {
  if (levels < 3) throw Error(ErrorKind::invalid_argument, "a convergence study needs at least 3 levels");
  std::vector<ConvergenceRecord> records;
  for (int level = 0; level < levels; ++level) {
    ConvergenceRecord rec;
    rec.k = k;
    rec.level = level;
    rec.n_div = options.base_divisions << level;
    const auto result = solve_problem(rec.n_div, k, problem, options);
    rec.h = result.mesh.h;
    rec.dof = result.mesh.num_nodes();
    rec.errors = error_measures(result.mesh, result.solve.solution, problem, options.errors);
    rec.l2_error = rec.errors.l2_error;
    rec.energy_error = rec.errors.energy_error;
    rec.solver_iterations = result.solve.iterations;
    rec.solver_residual = result.solve.relative_residual;
    if (options.geometry_report) rec.geometry = geometric_report(result.mesh, problem);
    if (!records.empty()) {
      rec.eoc_l2 = observed_order(records.back().l2_error, rec.l2_error);
      rec.eoc_energy = observed_order(records.back().energy_error, rec.energy_error);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace surfnitsche
