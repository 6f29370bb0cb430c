#pragma once

#include <Eigen/Dense>

#include <numbers>

namespace surfnitsche {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Boundary chains of the structured band. Torus bands only use lower/upper;
/// the flat square uses all four.
enum class BoundarySide { lower, upper, left, right };

inline const char* to_string(BoundarySide side) {
  switch (side) {
    case BoundarySide::lower: return "lower";
    case BoundarySide::upper: return "upper";
    case BoundarySide::left: return "left";
    case BoundarySide::right: return "right";
  }
  return "?";
}

}  // namespace surfnitsche
