#include "surfnitsche/surfnitsche.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace surfnitsche;

struct CommonConfig {
  std::string problem = "torus";
  int k = 1;
  double beta = default_beta;
  double rel_tol = 1e-12;
  int triangle_degree = 0;
  int edge_degree = 0;
  int error_degree = 0;
  bool local_h = false;
};

struct SolveConfig {
  int n_div = 8;
  std::string vtk;
  std::string matrix_out;
  std::string rhs_out;
};

struct ConvergenceConfig {
  int levels = 4;
  int base_divisions = 8;
  std::string csv;
  std::string table;
};

struct ReportConfig {
  int n_div = 8;
  std::string report_out;
};

void add_common(CLI::App& cmd, CommonConfig& c) {
  cmd.add_option("--problem", c.problem, "torus | torus-simple | flat-square")
      ->check(CLI::IsMember({"torus", "torus-simple", "flat-square"}))
      ->envname("SURFNITSCHE_PROBLEM")
      ->capture_default_str();
  cmd.add_option("--k", c.k, "element order")->check(CLI::Range(1, max_order))->envname("SURFNITSCHE_K")
      ->capture_default_str();
  cmd.add_option("--beta", c.beta, "Nitsche penalty")->envname("SURFNITSCHE_BETA")->capture_default_str();
  cmd.add_option("--rel-tol", c.rel_tol, "solver relative residual")->envname("SURFNITSCHE_REL_TOL")
      ->capture_default_str();
  cmd.add_option("--triangle-degree", c.triangle_degree, "assembly cell rule degree, 0 for 2k+2")
      ->check(CLI::Range(0, max_quadrature_degree))
      ->envname("SURFNITSCHE_TRIANGLE_DEGREE");
  cmd.add_option("--edge-degree", c.edge_degree, "assembly edge rule degree, 0 for 2k+2")
      ->check(CLI::Range(0, max_quadrature_degree))
      ->envname("SURFNITSCHE_EDGE_DEGREE");
  cmd.add_option("--error-degree", c.error_degree, "error rule degree, 0 for 2k+4")
      ->check(CLI::Range(0, max_quadrature_degree))
      ->envname("SURFNITSCHE_ERROR_DEGREE");
  cmd.add_flag("--local-h", c.local_h, "penalize with each edge's own length")->envname("SURFNITSCHE_LOCAL_H");
}

StudyOptions study_options(const CommonConfig& c) {
  StudyOptions o;
  o.assembly.beta = c.beta;
  o.assembly.triangle_degree = c.triangle_degree;
  o.assembly.edge_degree = c.edge_degree;
  o.assembly.local_h = c.local_h;
  o.solver.rel_tol = c.rel_tol;
  o.errors.degree = c.error_degree;
  return o;
}

template <class F>
void with_problem(const CommonConfig& c, F&& f) {
  if (c.problem == "torus") {
    f(TorusProblem::wavy());
  } else if (c.problem == "torus-simple") {
    f(TorusProblem::simple());
  } else {
    f(FlatSquareProblem(c.k));
  }
}

std::string num(double v) { return format_real(v); }

void run_solve(const CommonConfig& c, const SolveConfig& s) {
  with_problem(c, [&](const auto& problem) {
    const auto options = study_options(c);
    const auto result = solve_problem(s.n_div, c.k, problem, options);
    const auto& uh = result.solve.solution;
    const auto exact = interpolate_solution(result.mesh, problem);
    std::vector<double> nodal_error(uh.size());
    double max_err = 0.0;
    for (std::size_t i = 0; i < uh.size(); ++i) {
      nodal_error[i] = exact[i] - uh[i];
      max_err = std::max(max_err, std::abs(nodal_error[i]));
    }
    const auto err = error_measures(result.mesh, uh, problem, options.errors);

    std::cout << "problem=" << problem.name() << '\n'
              << "k=" << c.k << '\n'
              << "n_div=" << s.n_div << '\n'
              << "elements=" << result.mesh.num_elements() << '\n'
              << "dof=" << result.mesh.num_nodes() << '\n'
              << "h=" << num(result.mesh.h) << '\n'
              << "beta=" << num(c.beta) << '\n'
              << "solver=" << to_string(result.solve.method) << '\n'
              << "iterations=" << result.solve.iterations << '\n'
              << "refined=" << (result.solve.refined ? "yes" : "no") << '\n'
              << "relative_residual=" << num(result.solve.relative_residual) << '\n'
              << "l2_error=" << num(err.l2_error) << '\n'
              << "energy_error=" << num(err.energy_error) << '\n'
              << "max_nodal_error=" << num(max_err) << '\n';

    if (!s.vtk.empty()) {
      const std::vector<PointField> fields{{"solution", uh}, {"error", nodal_error}};
      write_file(s.vtk, [&](std::ostream& out) { write_vtk(out, result.mesh, fields); });
    }
    if (!s.matrix_out.empty()) {
      write_file(s.matrix_out, [&](std::ostream& out) { write_matrix_market(out, result.system.matrix); });
    }
    if (!s.rhs_out.empty()) {
      write_file(s.rhs_out, [&](std::ostream& out) {
        write_matrix_market(out, std::span<const double>(result.system.rhs));
      });
    }
  });
}

void run_convergence(const CommonConfig& c, const ConvergenceConfig& cc) {
  with_problem(c, [&](const auto& problem) {
    auto options = study_options(c);
    options.base_divisions = cc.base_divisions;
    const auto records = convergence_study(c.k, cc.levels, problem, options);
    write_convergence_table(std::cout, records);
    if (!cc.csv.empty()) write_file(cc.csv, [&](std::ostream& out) { write_convergence_csv(out, records); });
    if (!cc.table.empty()) write_file(cc.table, [&](std::ostream& out) { write_convergence_table(out, records); });
  });
}

void run_report(const CommonConfig& c, const ReportConfig& r) {
  with_problem(c, [&](const auto& problem) {
    const auto mesh = build_mesh(r.n_div, c.k, problem);
    const auto report = geometric_report(mesh, problem);
    write_geometric_report(std::cout, report);
    if (!r.report_out.empty()) {
      write_file(r.report_out, [&](std::ostream& out) { write_geometric_report(out, report); });
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nitsche surface finite elements for the Laplace-Beltrami Dirichlet problem"};
  app.require_subcommand(1);

  CommonConfig common;
  SolveConfig solve;
  ConvergenceConfig conv;
  ReportConfig report;

  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and report errors");
  add_common(*solve_cmd, common);
  solve_cmd->add_option("--n-div", solve.n_div, "grid divisions")->check(CLI::Range(2, 4096))
      ->envname("SURFNITSCHE_N_DIV")->capture_default_str();
  solve_cmd->add_option("--vtk", solve.vtk, "VTK output with solution and nodal error")->envname("SURFNITSCHE_VTK");
  solve_cmd->add_option("--matrix-out", solve.matrix_out, "MatrixMarket output of A")
      ->envname("SURFNITSCHE_MATRIX_OUT");
  solve_cmd->add_option("--rhs-out", solve.rhs_out, "MatrixMarket output of b")->envname("SURFNITSCHE_RHS_OUT");

  auto* conv_cmd = app.add_subcommand("convergence", "refinement study with observed orders");
  add_common(*conv_cmd, common);
  conv_cmd->add_option("--levels", conv.levels, "refinement levels")->check(CLI::Range(3, 8))
      ->envname("SURFNITSCHE_LEVELS")->capture_default_str();
  conv_cmd->add_option("--base-divisions", conv.base_divisions, "divisions on level 0")->check(CLI::Range(2, 512))
      ->envname("SURFNITSCHE_BASE_DIVISIONS")->capture_default_str();
  conv_cmd->add_option("--csv", conv.csv, "CSV output")->envname("SURFNITSCHE_CSV");
  conv_cmd->add_option("--table", conv.table, "plain-text table output")->envname("SURFNITSCHE_TABLE");

  auto* report_cmd = app.add_subcommand("mesh-report", "geometric approximation report");
  add_common(*report_cmd, common);
  report_cmd->add_option("--n-div", report.n_div, "grid divisions")->check(CLI::Range(2, 4096))
      ->envname("SURFNITSCHE_N_DIV")->capture_default_str();
  report_cmd->add_option("--report-out", report.report_out, "key-value output")
      ->envname("SURFNITSCHE_REPORT_OUT");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) run_solve(common, solve);
    if (conv_cmd->parsed()) run_convergence(common, conv);
    if (report_cmd->parsed()) run_report(common, report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
