#pragma once

#include "surfnitsche/error.hpp"
#include "surfnitsche/types.hpp"

#include <cmath>
#include <vector>

namespace surfnitsche {

/// Points are reference coordinates: (xi, eta) in the unit triangle
/// {xi, eta >= 0, xi + eta <= 1} for triangle rules, t in [0, 1] for edge
/// rules (stored in x(), y() unused).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

inline constexpr int max_quadrature_degree = 20;

namespace detail {

/// n-point Gauss-Legendre nodes/weights on [0, 1].
inline void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

inline void check_degree(int degree) {
  if (degree < 0 || degree > max_quadrature_degree) {
    throw Error(ErrorKind::unsupported_degree,
                "quadrature degree " + std::to_string(degree) + " outside [0, 20]");
  }
}

}  // namespace detail

/// Gauss-Legendre rule on [0, 1], exact for polynomials of the given degree.
inline QuadratureRule edge_rule(int degree) {
  detail::check_degree(degree);
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  detail::gauss_legendre_unit(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    rule.points.emplace_back(x[i], 0.0);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle. All weights
/// are positive; exact for polynomials of the given total degree.
inline QuadratureRule triangle_rule(int degree) {
  detail::check_degree(degree);
  const int n = (degree + 3) / 2;
  std::vector<double> x, w;
  detail::gauss_legendre_unit(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = x[i];
      const double v = x[j];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(w[i] * w[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace surfnitsche
