#pragma once

// Analytic torus geometry, the wavy-boundary band on it, and the manufactured
// Laplace-Beltrami problem. Everything in here is a pure function of its
// arguments.

#include "surfnitsche/error.hpp"
#include "surfnitsche/types.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>

namespace surfnitsche {

struct TorusParams {
  double major_radius = 1.0;
  double minor_radius = 0.4;

  void validate() const {
    if (!(minor_radius > 0.0 && minor_radius < major_radius)) {
      throw Error(ErrorKind::invalid_argument, "torus requires 0 < r < R");
    }
  }
};

/// Toroidal angles. theta lives in [0, 2pi); phi is a coordinate on the
/// universal cover and is never wrapped.
struct ToroidalCoords {
  double theta = 0.0;
  double phi = 0.0;

  static ToroidalCoords normalized(double theta, double phi) {
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return {t, phi};
  }
};

/// Band phi_lower(theta) <= phi <= phi_upper(theta) with
/// phi_lower = a cos(N1 theta), phi_upper = a cos(N2 theta) + offset.
struct BoundarySpec {
  double amplitude = 0.2;
  int n_lower = 4;
  int n_upper = 3;
  double offset = 0.6 * two_pi;

  static BoundarySpec wavy(const TorusParams& t) {
    return {0.2, 4, 3, 0.6 * (2.0 * t.major_radius * pi)};
  }
  static BoundarySpec straight(const TorusParams& t) {
    return {0.2, 0, 0, 0.6 * (2.0 * t.major_radius * pi)};
  }

  [[nodiscard]] int wave_count(BoundarySide side) const {
    return side == BoundarySide::lower ? n_lower : n_upper;
  }

  void validate() const {
    if (!(offset > 2.0 * std::abs(amplitude))) {
      throw Error(ErrorKind::invalid_argument, "boundary curves intersect: need offset > 2|amplitude|");
    }
    if (offset - (-2.0 * std::abs(amplitude)) >= two_pi) {
      throw Error(ErrorKind::invalid_argument, "band wraps around the torus in phi");
    }
  }
};

inline Vec3 torus_embed(const ToroidalCoords& c, const TorusParams& t) {
  const double w = t.major_radius + t.minor_radius * std::cos(c.theta);
  return {w * std::cos(c.phi), w * std::sin(c.phi), t.minor_radius * std::sin(c.theta)};
}

/// Partial derivatives of torus_embed with respect to theta and phi.
inline Vec3 torus_d_theta(const ToroidalCoords& c, const TorusParams& t) {
  const double s = std::sin(c.theta);
  return {-t.minor_radius * s * std::cos(c.phi), -t.minor_radius * s * std::sin(c.phi),
          t.minor_radius * std::cos(c.theta)};
}
inline Vec3 torus_d_phi(const ToroidalCoords& c, const TorusParams& t) {
  const double w = t.major_radius + t.minor_radius * std::cos(c.theta);
  return {-w * std::sin(c.phi), w * std::cos(c.phi), 0.0};
}

namespace detail {

inline double axis_distance_checked(const Vec3& x, const TorusParams& t) {
  const double rxy = std::hypot(x.x(), x.y());
  if (rxy == 0.0) {
    throw Error(ErrorKind::degenerate_input, "point on the torus symmetry axis");
  }
  if (rxy == t.major_radius && x.z() == 0.0) {
    throw Error(ErrorKind::degenerate_input, "point on the torus center circle");
  }
  return rxy;
}

}  // namespace detail

inline double signed_distance(const Vec3& x, const TorusParams& t) {
  const double rxy = detail::axis_distance_checked(x, t);
  return std::hypot(rxy - t.major_radius, x.z()) - t.minor_radius;
}

/// Angles of the closest torus point; phi is returned in (-pi, pi].
inline ToroidalCoords toroidal_coords(const Vec3& x, const TorusParams& t) {
  const double rxy = detail::axis_distance_checked(x, t);
  return ToroidalCoords::normalized(std::atan2(x.z(), rxy - t.major_radius),
                                    std::atan2(x.y(), x.x()));
}

inline Vec3 closest_point(const Vec3& x, const TorusParams& t) {
  const double rxy = detail::axis_distance_checked(x, t);
  const Vec3 center{t.major_radius * x.x() / rxy, t.major_radius * x.y() / rxy, 0.0};
  const Vec3 d = x - center;
  return center + (t.minor_radius / d.norm()) * d;
}

inline Vec3 surface_normal(const ToroidalCoords& c) {
  return {std::cos(c.theta) * std::cos(c.phi), std::cos(c.theta) * std::sin(c.phi),
          std::sin(c.theta)};
}

inline double boundary_phi(BoundarySide side, double theta, const BoundarySpec& b) {
  if (side == BoundarySide::lower) return b.amplitude * std::cos(b.n_lower * theta);
  return b.amplitude * std::cos(b.n_upper * theta) + b.offset;
}

inline double boundary_phi_derivative(BoundarySide side, double theta, const BoundarySpec& b) {
  const int n = b.wave_count(side);
  return -b.amplitude * n * std::sin(n * theta);
}

inline Vec3 boundary_curve(BoundarySide side, double theta, const BoundarySpec& b,
                           const TorusParams& t) {
  return torus_embed({theta, boundary_phi(side, theta, b)}, t);
}

/// Curve parameter theta of the Euclidean closest point of x on a boundary
/// curve: coarse sampling followed by golden-section refinement.
inline double project_to_boundary_parameter(const Vec3& x, BoundarySide side,
                                            const BoundarySpec& b, const TorusParams& t) {
  if (side != BoundarySide::lower && side != BoundarySide::upper) {
    throw Error(ErrorKind::invalid_argument, "torus band has only lower/upper boundaries");
  }
  const auto dist2 = [&](double theta) { return (boundary_curve(side, theta, b, t) - x).squaredNorm(); };

  const int samples = 64 * std::max(1, std::abs(b.wave_count(side)));
  const double step = two_pi / samples;
  int best = 0;
  double best_val = dist2(0.0);
  for (int i = 1; i < samples; ++i) {
    const double v = dist2(i * step);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }

  constexpr double inv_phi = 0.6180339887498949;
  constexpr int max_iterations = 200;
  double lo = (best - 1) * step;
  double hi = (best + 1) * step;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = dist2(c);
  double fd = dist2(d);
  int it = 0;
  while (hi - lo > 1e-12) {
    if (++it > max_iterations || !std::isfinite(fc) || !std::isfinite(fd)) {
      throw Error(ErrorKind::non_convergence, "boundary projection did not converge");
    }
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = dist2(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = dist2(d);
    }
  }
  return ToroidalCoords::normalized(0.5 * (lo + hi), 0.0).theta;
}

inline Vec3 project_to_boundary(const Vec3& x, BoundarySide side, const BoundarySpec& b,
                                const TorusParams& t) {
  return boundary_curve(side, project_to_boundary_parameter(x, side, b, t), b, t);
}

/// Exterior unit conormal of the band at the curve point with parameter theta.
inline Vec3 boundary_conormal_exact(BoundarySide side, double theta, const BoundarySpec& b,
                                    const TorusParams& t) {
  const ToroidalCoords c{theta, boundary_phi(side, theta, b)};
  const Vec3 tangent = torus_d_theta(c, t) + boundary_phi_derivative(side, theta, b) * torus_d_phi(c, t);
  Vec3 nu = tangent.cross(surface_normal(c)).normalized();
  const double outward = side == BoundarySide::lower ? -1.0 : 1.0;
  if (outward * nu.dot(torus_d_phi(c, t)) < 0.0) nu = -nu;
  return nu;
}

// --- manufactured solution u = cos(3 phi + 5 theta) sin(2 theta) ---

inline double exact_solution(const ToroidalCoords& c) {
  return std::cos(3.0 * c.phi + 5.0 * c.theta) * std::sin(2.0 * c.theta);
}

namespace detail {

struct SolutionDerivatives {
  double u_theta, u_phi, u_theta_theta, u_phi_phi;
};

inline SolutionDerivatives solution_derivatives(const ToroidalCoords& c) {
  const double a = 3.0 * c.phi + 5.0 * c.theta;
  const double ca = std::cos(a), sa = std::sin(a);
  const double s2 = std::sin(2.0 * c.theta), c2 = std::cos(2.0 * c.theta);
  return {-5.0 * sa * s2 + 2.0 * ca * c2, -3.0 * sa * s2, -29.0 * ca * s2 - 20.0 * sa * c2,
          -9.0 * ca * s2};
}

}  // namespace detail

/// Tangential gradient (1/r) u_theta e_theta + (1/w) u_phi e_phi.
inline Vec3 exact_surface_gradient(const ToroidalCoords& c, const TorusParams& t) {
  const auto d = detail::solution_derivatives(c);
  const double w = t.major_radius + t.minor_radius * std::cos(c.theta);
  const Vec3 e_theta = torus_d_theta(c, t) / t.minor_radius;
  const Vec3 e_phi = torus_d_phi(c, t) / w;
  return (d.u_theta / t.minor_radius) * e_theta + (d.u_phi / w) * e_phi;
}

/// f = -Laplace-Beltrami(u) from the toroidal metric r^2 dtheta^2 + w^2 dphi^2.
inline double load_f(const ToroidalCoords& c, const TorusParams& t) {
  const auto d = detail::solution_derivatives(c);
  const double r = t.minor_radius;
  const double w = t.major_radius + r * std::cos(c.theta);
  const double lap = d.u_theta_theta / (r * r) - std::sin(c.theta) / (r * w) * d.u_theta +
                     d.u_phi_phi / (w * w);
  return -lap;
}

inline double dirichlet_g(const Vec3& x, const TorusParams& t) {
  return exact_solution(toroidal_coords(x, t));
}

// --- problem types consumed by the mesh generator, assembly and harness ---

/// What the element-level code needs from a surface problem. All point
/// arguments may lie off the surface; the problem composes with its own
/// closest-point map.
template <class P>
concept SurfaceProblem = requires(const P& p, const Vec3& x, BoundarySide side, double a, int n) {
  { p.name() } -> std::convertible_to<std::string>;
  { p.closest_point(x) } -> std::convertible_to<Vec3>;
  { p.signed_distance(x) } -> std::convertible_to<double>;
  { p.normal(x) } -> std::convertible_to<Vec3>;
  { p.chart(a, a) } -> std::convertible_to<Vec3>;
  { p.periodic() } -> std::convertible_to<bool>;
  { p.cells_around(n) } -> std::convertible_to<int>;
  { p.cells_across(n) } -> std::convertible_to<int>;
  { p.is_boundary(side) } -> std::convertible_to<bool>;
  { p.project_to_boundary(x, side) } -> std::convertible_to<Vec3>;
  { p.boundary_correction(x, side) } -> std::convertible_to<Vec3>;
  { p.boundary_conormal(x, side) } -> std::convertible_to<Vec3>;
  { p.solution(x) } -> std::convertible_to<double>;
  { p.solution_gradient(x) } -> std::convertible_to<Vec3>;
  { p.load(x) } -> std::convertible_to<double>;
  { p.dirichlet(x) } -> std::convertible_to<double>;
};

/// Manufactured problem on the torus band. solution/load are u o p, f o p;
/// solution_gradient is the ambient gradient of u o p.
class TorusProblem {
 public:
  TorusProblem(TorusParams torus, BoundarySpec boundary) : torus_(torus), boundary_(boundary) {
    torus_.validate();
    boundary_.validate();
  }

  static TorusProblem wavy() {
    const TorusParams t{};
    return {t, BoundarySpec::wavy(t)};
  }
  static TorusProblem simple() {
    const TorusParams t{};
    return {t, BoundarySpec::straight(t)};
  }

  [[nodiscard]] const TorusParams& torus() const { return torus_; }
  [[nodiscard]] const BoundarySpec& boundary() const { return boundary_; }

  [[nodiscard]] std::string name() const {
    return boundary_.n_lower == 0 && boundary_.n_upper == 0 ? "torus-simple" : "torus";
  }

  [[nodiscard]] Vec3 closest_point(const Vec3& x) const { return surfnitsche::closest_point(x, torus_); }
  [[nodiscard]] double signed_distance(const Vec3& x) const { return surfnitsche::signed_distance(x, torus_); }
  [[nodiscard]] Vec3 normal(const Vec3& x) const { return surface_normal(toroidal_coords(x, torus_)); }

  /// (a, s) in [0,1]^2: theta = 2 pi a, phi interpolates between the curves.
  [[nodiscard]] Vec3 chart(double a, double s) const {
    const double theta = two_pi * a;
    const double lo = boundary_phi(BoundarySide::lower, theta, boundary_);
    const double hi = boundary_phi(BoundarySide::upper, theta, boundary_);
    return torus_embed({theta, lo + s * (hi - lo)}, torus_);
  }
  [[nodiscard]] bool periodic() const { return true; }
  /// Three cells around the tube and two across the band per division. The
  /// wavy boundary curves are longer than the band is wide, and their waves
  /// must be resolved on the coarsest grid for curved elements to stay valid.
  [[nodiscard]] int cells_around(int n_div) const { return 3 * n_div; }
  [[nodiscard]] int cells_across(int n_div) const { return 2 * n_div; }
  [[nodiscard]] bool is_boundary(BoundarySide side) const {
    return side == BoundarySide::lower || side == BoundarySide::upper;
  }
  [[nodiscard]] Vec3 project_to_boundary(const Vec3& x, BoundarySide side) const {
    return surfnitsche::project_to_boundary(x, side, boundary_, torus_);
  }
  /// Mesh-node correction onto the boundary: keeps theta and sets
  /// phi = phi_side(theta).
  [[nodiscard]] Vec3 boundary_correction(const Vec3& x, BoundarySide side) const {
    return boundary_curve(side, toroidal_coords(x, torus_).theta, boundary_, torus_);
  }
  [[nodiscard]] Vec3 boundary_conormal(const Vec3& x, BoundarySide side) const {
    return boundary_conormal_exact(side, project_to_boundary_parameter(x, side, boundary_, torus_),
                                   boundary_, torus_);
  }

  [[nodiscard]] double solution(const Vec3& x) const { return exact_solution(toroidal_coords(x, torus_)); }
  [[nodiscard]] double load(const Vec3& x) const { return load_f(toroidal_coords(x, torus_), torus_); }
  [[nodiscard]] double dirichlet(const Vec3& x) const { return dirichlet_g(x, torus_); }

  /// grad(u o p)(x) = u_theta grad(theta) + u_phi grad(phi).
  [[nodiscard]] Vec3 solution_gradient(const Vec3& x) const {
    const auto c = toroidal_coords(x, torus_);
    const auto d = detail::solution_derivatives(c);
    const double rho2 = x.x() * x.x() + x.y() * x.y();
    const double rxy = std::sqrt(rho2);
    const double q = rxy - torus_.major_radius;
    const double tube2 = q * q + x.z() * x.z();
    const Vec3 grad_rxy{x.x() / rxy, x.y() / rxy, 0.0};
    const Vec3 grad_theta = (-x.z() * grad_rxy + q * Vec3::UnitZ()) / tube2;
    const Vec3 grad_phi{-x.y() / rho2, x.x() / rho2, 0.0};
    return d.u_theta * grad_theta + d.u_phi * grad_phi;
  }

 private:
  TorusParams torus_;
  BoundarySpec boundary_;
};

/// Unit square in the z = 0 plane with a polynomial exact solution of the
/// given degree (1..3). Geometry is represented exactly by every mesh.
class FlatSquareProblem {
 public:
  explicit FlatSquareProblem(int degree = 1) : degree_(degree) {
    if (degree < 0 || degree > 3) {
      throw Error(ErrorKind::invalid_argument, "flat-square solution degree must be in [0, 3]");
    }
  }

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::string name() const { return "flat-square"; }

  [[nodiscard]] Vec3 closest_point(const Vec3& x) const { return {x.x(), x.y(), 0.0}; }
  [[nodiscard]] double signed_distance(const Vec3& x) const { return x.z(); }
  [[nodiscard]] Vec3 normal(const Vec3&) const { return Vec3::UnitZ(); }
  [[nodiscard]] Vec3 chart(double a, double s) const { return {a, s, 0.0}; }
  [[nodiscard]] bool periodic() const { return false; }
  [[nodiscard]] int cells_around(int n_div) const { return n_div; }
  [[nodiscard]] int cells_across(int n_div) const { return n_div; }
  [[nodiscard]] bool is_boundary(BoundarySide) const { return true; }

  [[nodiscard]] Vec3 project_to_boundary(const Vec3& x, BoundarySide side) const {
    const double cx = std::clamp(x.x(), 0.0, 1.0);
    const double cy = std::clamp(x.y(), 0.0, 1.0);
    switch (side) {
      case BoundarySide::lower: return {cx, 0.0, 0.0};
      case BoundarySide::upper: return {cx, 1.0, 0.0};
      case BoundarySide::left: return {0.0, cy, 0.0};
      case BoundarySide::right: return {1.0, cy, 0.0};
    }
    return x;
  }
  [[nodiscard]] Vec3 boundary_correction(const Vec3& x, BoundarySide side) const {
    return project_to_boundary(x, side);
  }
  [[nodiscard]] Vec3 boundary_conormal(const Vec3&, BoundarySide side) const {
    switch (side) {
      case BoundarySide::lower: return -Vec3::UnitY();
      case BoundarySide::upper: return Vec3::UnitY();
      case BoundarySide::left: return -Vec3::UnitX();
      case BoundarySide::right: return Vec3::UnitX();
    }
    return Vec3::Zero();
  }

  // u = 1 + x + 2y [+ x^2 + xy - y^2/2] [+ x^3 + x^2 y + x y^2 - 2 y^3]
  [[nodiscard]] double solution(const Vec3& p) const {
    const double x = p.x(), y = p.y();
    double u = degree_ == 0 ? 1.0 : 1.0 + x + 2.0 * y;
    if (degree_ >= 2) u += x * x + x * y - 0.5 * y * y;
    if (degree_ >= 3) u += x * x * x + x * x * y + x * y * y - 2.0 * y * y * y;
    return u;
  }
  [[nodiscard]] Vec3 solution_gradient(const Vec3& p) const {
    const double x = p.x(), y = p.y();
    if (degree_ == 0) return Vec3::Zero();
    Vec3 g{1.0, 2.0, 0.0};
    if (degree_ >= 2) g += Vec3{2.0 * x + y, x - y, 0.0};
    if (degree_ >= 3) g += Vec3{3.0 * x * x + 2.0 * x * y + y * y, x * x + 2.0 * x * y - 6.0 * y * y, 0.0};
    return g;
  }
  [[nodiscard]] double load(const Vec3& p) const {
    double lap = 0.0;
    if (degree_ >= 2) lap += 1.0;
    if (degree_ >= 3) lap += 8.0 * p.x() - 10.0 * p.y();
    return -lap;
  }
  [[nodiscard]] double dirichlet(const Vec3& x) const { return solution(x); }

 private:
  int degree_;
};

static_assert(SurfaceProblem<TorusProblem>);
static_assert(SurfaceProblem<FlatSquareProblem>);

}  // namespace surfnitsche
