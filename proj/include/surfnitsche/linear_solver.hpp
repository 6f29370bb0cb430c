#pragma once

#include "surfnitsche/error.hpp"
#include "surfnitsche/sparse.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace surfnitsche {

enum class SolveMethod { iterative, direct };

inline const char* to_string(SolveMethod m) { return m == SolveMethod::direct ? "direct" : "iterative"; }

struct SolveReport {
  std::vector<double> solution;
  int iterations = 0;
  double relative_residual = 0.0;
  SolveMethod method = SolveMethod::iterative;
  /// A dense correction step was applied after CG converged.
  bool refined = false;
};

struct SolveOptions {
  double rel_tol = 1e-12;
  /// 0 selects 50 * dim.
  int max_iterations = 0;
  /// Systems up to this size fall back to dense Cholesky when CG stalls.
  int dense_fallback_limit = 2000;
  /// Systems up to dense_fallback_limit get one dense Cholesky correction
  /// after CG converges. Penalty rows leave CG accurate only to about
  /// cond(A) * rel_tol, which is too coarse for exactness checks.
  bool refine_small = true;
};

/// ||b - A x|| / ||b||, recomputed from scratch.
inline double relative_residual(const CsrMatrix& a, std::span<const double> x, std::span<const double> b) {
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double nb = norm2(b);
  return nb == 0.0 ? norm2(r) : norm2(r) / nb;
}

/// Row-major dense Cholesky solve. Throws not-positive-definite on a
/// nonpositive pivot.
inline std::vector<double> dense_cholesky_solve(std::vector<double> a, int n, std::span<const double> b) {
  for (int j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (int m = 0; m < j; ++m) d -= a[j * n + m] * a[j * n + m];
    if (!(d > 0.0)) throw Error(ErrorKind::not_positive_definite, "nonpositive Cholesky pivot");
    const double l = std::sqrt(d);
    a[j * n + j] = l;
    for (int i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (int m = 0; m < j; ++m) s -= a[i * n + m] * a[j * n + m];
      a[i * n + j] = s / l;
    }
  }
  std::vector<double> x(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < i; ++m) x[i] -= a[i * n + m] * x[m];
    x[i] /= a[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int m = i + 1; m < n; ++m) x[i] -= a[m * n + i] * x[m];
    x[i] /= a[i * n + i];
  }
  return x;
}

inline std::vector<double> to_dense(const CsrMatrix& a) {
  const int n = a.rows();
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) d[i * n + a.col_idx()[p]] = a.values()[p];
  }
  return d;
}

/// Banded Cholesky factorization of a symmetric matrix (lower triangle used).
/// Returns false on the first nonpositive pivot.
inline bool band_cholesky_succeeds(const CsrMatrix& a) {
  const int n = a.rows();
  const int bw = a.bandwidth();
  const int width = bw + 1;
  // row i holds L(i, i - bw .. i) at offsets 0 .. bw
  std::vector<double> band(static_cast<std::size_t>(n) * width, 0.0);
  const auto at = [&](int i, int j) -> double& { return band[static_cast<std::size_t>(i) * width + (j - i + bw)]; };
  for (int i = 0; i < n; ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      const int j = a.col_idx()[p];
      if (j <= i) at(i, j) = a.values()[p];
    }
  }
  for (int i = 0; i < n; ++i) {
    const int lo_i = std::max(0, i - bw);
    for (int j = lo_i; j <= i; ++j) {
      const int lo = std::max(lo_i, j - bw);
      double s = at(i, j);
      for (int m = lo; m < j; ++m) s -= at(i, m) * at(j, m);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  return true;
}

/// Jacobi-preconditioned conjugate gradients. Stops once both ||r|| / ||b||
/// and the Jacobi-scaled ||D^{-1/2} r|| / ||D^{-1/2} b|| reach rel_tol; the
/// scaled test keeps rows with small diagonals from being drowned out by
/// penalty rows. Convergence is confirmed on the recomputed residual and the
/// recurrence is restarted if they disagree.
inline SolveReport solve_spd(const CsrMatrix& a, std::span<const double> b, const SolveOptions& options = {}) {
  if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "rel_tol must lie in (0, 1)");
  }
  const int n = a.rows();
  if (static_cast<int>(b.size()) != n || a.cols() != n) {
    throw Error(ErrorKind::invalid_argument, "system dimensions do not match");
  }
  SolveReport report;
  report.solution.assign(n, 0.0);
  const double nb = norm2(b);
  if (nb == 0.0) return report;

  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw Error(ErrorKind::not_positive_definite, "nonpositive diagonal entry");
    d = 1.0 / d;
  }

  double nb_scaled = 0.0;
  for (int i = 0; i < n; ++i) nb_scaled += inv_diag[i] * b[i] * b[i];
  nb_scaled = std::sqrt(nb_scaled);
  const auto converged = [&](std::span<const double> res) {
    double scaled = 0.0;
    for (int i = 0; i < n; ++i) scaled += inv_diag[i] * res[i] * res[i];
    return norm2(res) <= options.rel_tol * nb && std::sqrt(scaled) <= options.rel_tol * nb_scaled;
  };
  const auto true_residual = [&](std::span<const double> x) {
    std::vector<double> res = a.multiply(x);
    for (int i = 0; i < n; ++i) res[i] = b[i] - res[i];
    return res;
  };

  const int cap = options.max_iterations > 0 ? options.max_iterations : 50 * n;
  auto& x = report.solution;
  std::vector<double> r(b.begin(), b.end()), z(n), p(n), ap(n);
  const auto restart = [&] {
    a.multiply(x, ap);
    for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
  };
  restart();
  double rz = dot(r, z);
  int it = 0;
  for (; it < cap; ++it) {
    if (converged(r)) {
      if (converged(true_residual(x))) break;
      restart();
      rz = dot(r, z);
    }
    a.multiply(p, ap);
    const double curvature = dot(p, ap);
    if (!(curvature > 0.0)) {
      throw Error(ErrorKind::not_positive_definite, "negative curvature in conjugate gradients");
    }
    const double alpha = rz / curvature;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  report.iterations = it;
  report.relative_residual = relative_residual(a, x, b);
  if (report.relative_residual <= options.rel_tol) {
    if (options.refine_small && n <= options.dense_fallback_limit) {
      const auto dx = dense_cholesky_solve(to_dense(a), n, true_residual(x));
      std::vector<double> y = x;
      for (int i = 0; i < n; ++i) y[i] += dx[i];
      const double res = relative_residual(a, y, b);
      if (res <= report.relative_residual) {
        x = std::move(y);
        report.relative_residual = res;
        report.refined = true;
      }
    }
    return report;
  }

  if (n <= options.dense_fallback_limit) {
    report.solution = dense_cholesky_solve(to_dense(a), n, b);
    report.method = SolveMethod::direct;
    report.relative_residual = relative_residual(a, report.solution, b);
    if (report.relative_residual <= options.rel_tol) return report;
  }
  throw Error(ErrorKind::max_iterations_exceeded,
              "conjugate gradients stopped at relative residual " + std::to_string(report.relative_residual));
}

}  // namespace surfnitsche
