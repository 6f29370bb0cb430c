#pragma once

// Text exports: convergence CSV and table, legacy VTK meshes, MatrixMarket
// systems and key-value geometry reports. All numbers go through snprintf
// with fixed formats so identical data gives identical bytes.

#include "surfnitsche/analysis.hpp"
#include "surfnitsche/assembly.hpp"
#include "surfnitsche/error.hpp"
#include "surfnitsche/mesh.hpp"
#include "surfnitsche/mesh_gen.hpp"
#include "surfnitsche/reference_element.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace surfnitsche {

namespace detail {

inline std::string format_number(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace detail

/// Scientific notation with 12 significant digits.
inline std::string format_real(double v) { return detail::format_number("%.12e", v); }

/// Fixed notation for observed orders; empty when undefined.
inline std::string format_order(double v) { return std::isfinite(v) ? detail::format_number("%.6f", v) : ""; }

inline constexpr const char* csv_header = "k,level,h,dof,energy_error,l2_error,eoc_energy,eoc_l2";

inline void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
  out << csv_header << '\n';
  for (const auto& r : records) {
    out << r.k << ',' << r.level << ',' << format_real(r.h) << ',' << r.dof << ',' << format_real(r.energy_error)
        << ',' << format_real(r.l2_error) << ',' << format_order(r.eoc_energy) << ',' << format_order(r.eoc_l2)
        << '\n';
  }
}

inline void write_convergence_table(std::ostream& out, std::span<const ConvergenceRecord> records) {
  char line[256];
  std::snprintf(line, sizeof line, "%2s %5s %6s %12s %8s %14s %8s %14s %8s\n", "k", "level", "n_div", "h", "dof",
                "energy_error", "eoc", "l2_error", "eoc");
  out << line;
  for (const auto& r : records) {
    const std::string ee = std::isfinite(r.eoc_energy) ? detail::format_number("%.3f", r.eoc_energy) : "-";
    const std::string el = std::isfinite(r.eoc_l2) ? detail::format_number("%.3f", r.eoc_l2) : "-";
    std::snprintf(line, sizeof line, "%2d %5d %6d %12.6e %8d %14.6e %8s %14.6e %8s\n", r.k, r.level, r.n_div, r.h,
                  r.dof, r.energy_error, ee.c_str(), r.l2_error, el.c_str());
    out << line;
  }
}

/// Local node order of a VTK Lagrange triangle in terms of lattice indices:
/// vertices, the interior nodes of edges 0-1, 1-2, 2-0, then cell-interior
/// nodes.
inline std::vector<int> vtk_node_order(const LagrangeLattice& lattice) {
  std::vector<int> order{lattice.vertex(0), lattice.vertex(1), lattice.vertex(2)};
  const int k = lattice.order();
  for (int e = 0; e < 3; ++e) {
    const auto nodes = lattice.edge_nodes(e);
    order.insert(order.end(), nodes.begin() + 1, nodes.end() - 1);
  }
  for (int i = 0; i < lattice.size(); ++i) {
    const auto [p, q] = lattice.lattice(i);
    if (p > 0 && q > 0 && p + q < k) order.push_back(i);
  }
  return order;
}

inline constexpr int vtk_lagrange_triangle = 69;

struct PointField {
  std::string name;
  std::span<const double> values;
};

inline void write_vtk(std::ostream& out, const ParametricMesh& mesh, std::span<const PointField> fields = {}) {
  const LagrangeLattice lattice(mesh.order);
  const auto order = vtk_node_order(lattice);
  const int npe = lattice.size();
  out << "# vtk DataFile Version 3.0\n";
  out << "surfnitsche order-" << mesh.order << " mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& x : mesh.nodes) {
    out << format_real(x.x()) << ' ' << format_real(x.y()) << ' ' << format_real(x.z()) << '\n';
  }
  out << "CELLS " << mesh.num_elements() << ' ' << mesh.num_elements() * (npe + 1) << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto conn = mesh.element(e);
    out << npe;
    for (int i : order) out << ' ' << conn[i];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) out << vtk_lagrange_triangle << '\n';
  if (fields.empty()) return;
  out << "POINT_DATA " << mesh.num_nodes() << '\n';
  for (const auto& f : fields) {
    if (static_cast<int>(f.values.size()) != mesh.num_nodes()) {
      throw Error(ErrorKind::invalid_argument, "point field '" + f.name + "' does not match mesh nodes");
    }
    out << "SCALARS " << f.name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : f.values) out << format_real(v) << '\n';
  }
}

/// Lower triangle in MatrixMarket symmetric coordinate format, 1-based.
inline void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  std::size_t count = 0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) count += a.col_idx()[p] <= i ? 1 : 0;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.rows() << ' ' << a.cols() << ' ' << count << '\n';
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const int j = a.col_idx()[p];
      if (j <= i) out << i + 1 << ' ' << j + 1 << ' ' << detail::format_number("%.17e", a.values()[p]) << '\n';
    }
  }
}

/// Dense column vector in MatrixMarket array format.
inline void write_matrix_market(std::ostream& out, std::span<const double> b) {
  out << "%%MatrixMarket matrix array real general\n";
  out << b.size() << " 1\n";
  for (double v : b) out << detail::format_number("%.17e", v) << '\n';
}

inline void write_geometric_report(std::ostream& out, const GeometricReport& r) {
  out << "max_rho=" << format_real(r.max_rho) << '\n';
  out << "max_normal_dev=" << format_real(r.max_normal_dev) << '\n';
  out << "max_boundary_dist=" << format_real(r.max_boundary_dist) << '\n';
  out << "max_boundary_node_dist=" << format_real(r.max_boundary_node_dist) << '\n';
  out << "max_conormal_dev=" << format_real(r.max_conormal_dev) << '\n';
  out << "min_scaled_jacobian=" << format_real(r.min_scaled_jacobian) << '\n';
}

/// Opens path for writing, runs the writer and checks the stream state.
inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_failure, "cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw Error(ErrorKind::io_failure, "failed writing '" + path + "'");
}

}  // namespace surfnitsche
