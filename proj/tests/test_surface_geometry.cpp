#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace surfnitsche;

namespace {

const TorusParams torus{};

Vec3 random_near_surface(std::mt19937& rng, double band) {
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::uniform_real_distribution<double> offset(-band, band);
  const ToroidalCoords c{angle(rng), angle(rng)};
  return torus_embed(c, torus) + offset(rng) * surface_normal(c);
}

}  // namespace

TEST(TorusEmbed, ReferencePoints) {
  EXPECT_LT((torus_embed({0.0, 0.0}, torus) - Vec3(1.4, 0.0, 0.0)).norm(), 1e-15);
  EXPECT_LT((torus_embed({pi, 0.0}, torus) - Vec3(0.6, 0.0, 0.0)).norm(), 1e-15);
  EXPECT_LT((torus_embed({pi / 2, pi / 2}, torus) - Vec3(0.0, 1.0, 0.4)).norm(), 1e-15);
}

TEST(TorusParams, RejectsInvalidRadii) {
  EXPECT_THROW((TorusParams{1.0, 1.5}.validate()), Error);
  EXPECT_THROW((TorusParams{1.0, 0.0}.validate()), Error);
  EXPECT_NO_THROW(torus.validate());
}

TEST(SignedDistance, ReferencePoints) {
  EXPECT_NEAR(signed_distance({2.0, 0.0, 0.0}, torus), 0.6, 1e-15);
  EXPECT_NEAR(signed_distance({1.4, 0.0, 0.0}, torus), 0.0, 1e-15);
  EXPECT_NEAR(signed_distance({1.0, 0.0, 0.1}, torus), -0.3, 1e-15);
}

TEST(SignedDistance, DegenerateInputOnAxis) {
  try {
    signed_distance({0.0, 0.0, 0.3}, torus);
    FAIL() << "expected degenerate-input";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_input);
  }
  EXPECT_THROW(closest_point({0.0, 0.0, -1.0}, torus), Error);
  EXPECT_THROW(closest_point({1.0, 0.0, 0.0}, torus), Error);
}

TEST(ClosestPoint, ReferencePoints) {
  EXPECT_LT((closest_point({2.0, 0.0, 0.0}, torus) - Vec3(1.4, 0.0, 0.0)).norm(), 1e-15);
  const Vec3 on = torus_embed({1.1, -2.3}, torus);
  EXPECT_LT((closest_point(on, torus) - on).norm(), 1e-15);
}

TEST(ClosestPoint, MatchesGridSearchOracle) {
  const Vec3 x{1.0, 0.0, 0.1};
  EXPECT_LT((closest_point(x, torus) - oracle::nearest_on_torus(x, torus)).norm(), 1e-10);
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vec3 y = random_near_surface(rng, 0.2);
    EXPECT_LT((closest_point(y, torus) - oracle::nearest_on_torus(y, torus)).norm(), 1e-10) << i;
  }
}

TEST(ClosestPoint, DistanceAndIdempotence) {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = random_near_surface(rng, torus.minor_radius / 2);
    const Vec3 p = closest_point(x, torus);
    EXPECT_NEAR((x - p).norm(), std::abs(signed_distance(x, torus)), 1e-12);
    EXPECT_LT((closest_point(p, torus) - p).norm(), 1e-12);
    EXPECT_NEAR(signed_distance(p, torus), 0.0, 1e-12);
  }
}

TEST(SurfaceNormal, ReferenceValues) {
  EXPECT_LT((surface_normal({0.0, 0.0}) - Vec3(1.0, 0.0, 0.0)).norm(), 1e-15);
  EXPECT_LT((surface_normal({pi / 2, 0.0}) - Vec3(0.0, 0.0, 1.0)).norm(), 1e-15);
}

TEST(SurfaceNormal, UnitAndEqualToDistanceGradient) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  constexpr double step = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const ToroidalCoords c{angle(rng), angle(rng)};
    const Vec3 n = surface_normal(c);
    EXPECT_NEAR(n.norm(), 1.0, 1e-14);
    const Vec3 x = torus_embed(c, torus);
    Vec3 fd;
    for (int d = 0; d < 3; ++d) {
      Vec3 e = Vec3::Zero();
      e[d] = step;
      fd[d] = (signed_distance(x + e, torus) - signed_distance(x - e, torus)) / (2 * step);
    }
    EXPECT_LT((fd - n).norm(), 1e-6);
  }
}

TEST(BoundaryPhi, CurveValues) {
  const auto wavy = BoundarySpec::wavy(torus);
  const auto straight = BoundarySpec::straight(torus);
  EXPECT_DOUBLE_EQ(boundary_phi(BoundarySide::lower, 0.0, wavy), 0.2);
  EXPECT_NEAR(boundary_phi(BoundarySide::upper, 0.0, wavy), 0.2 + 1.2 * pi, 1e-15);
  EXPECT_DOUBLE_EQ(boundary_phi(BoundarySide::lower, 1.234, straight), 0.2);
  EXPECT_NO_THROW(wavy.validate());
  EXPECT_THROW((BoundarySpec{0.2, 4, 3, 0.3}.validate()), Error);
}

TEST(ProjectToBoundary, IdentityOnCurve) {
  const auto b = BoundarySpec::wavy(torus);
  for (auto side : {BoundarySide::lower, BoundarySide::upper}) {
    for (double th : {0.0, 0.7, 2.0, 5.9}) {
      const Vec3 x = boundary_curve(side, th, b, torus);
      EXPECT_LT((project_to_boundary(x, side, b, torus) - x).norm(), 1e-10);
    }
  }
}

TEST(ProjectToBoundary, ConstantCurveKeepsPhi) {
  const auto b = BoundarySpec::straight(torus);
  const Vec3 x = torus_embed({1.0, 0.3}, torus) + 0.05 * surface_normal({1.0, 0.3});
  const Vec3 p = project_to_boundary(x, BoundarySide::lower, b, torus);
  EXPECT_NEAR(toroidal_coords(p, torus).phi, 0.2, 1e-14);
}

TEST(ProjectToBoundary, NoPolylineSampleIsCloser) {
  const auto b = BoundarySpec::wavy(torus);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::uniform_real_distribution<double> off(-0.1, 0.1);
  for (int i = 0; i < 6; ++i) {
    const auto side = i % 2 == 0 ? BoundarySide::lower : BoundarySide::upper;
    const double th = angle(rng);
    const ToroidalCoords c{th + off(rng), boundary_phi(side, th, b) + off(rng)};
    const Vec3 x = torus_embed(c, torus) + off(rng) * surface_normal(c);
    const double d = (project_to_boundary(x, side, b, torus) - x).norm();
    EXPECT_LE(d, oracle::nearest_curve_sample(x, side, b, torus, 1'000'000) + 1e-12) << i;
  }
}

TEST(ProjectToBoundary, RejectsSideWithoutCurve) {
  EXPECT_THROW(project_to_boundary({1.4, 0.0, 0.0}, BoundarySide::left, BoundarySpec::wavy(torus), torus), Error);
}

TEST(ExactSolution, ReferenceValues) {
  EXPECT_DOUBLE_EQ(exact_solution({0.0, 1.3}), 0.0);
  EXPECT_NEAR(exact_solution({pi / 4, 0.0}), -std::sqrt(2.0) / 2, 1e-15);
}

TEST(ExactSolution, LoadMatchesFiniteDifferenceOracle) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  const auto u = [](double th, double ph) { return exact_solution({th, ph}); };
  for (int i = 0; i < 50; ++i) {
    const double th = angle(rng), ph = angle(rng);
    const double fd = oracle::fd_minus_laplace_beltrami(u, th, ph, torus, 1e-4);
    EXPECT_NEAR(load_f({th, ph}, torus), fd, 1e-5) << th << ' ' << ph;
  }
}

TEST(ExactSolution, GradientIsTangentialAndMatchesDifferences) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  const auto problem = TorusProblem::wavy();
  constexpr double step = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const ToroidalCoords c{angle(rng), angle(rng)};
    const Vec3 g = exact_surface_gradient(c, torus);
    EXPECT_NEAR(g.dot(surface_normal(c)), 0.0, 1e-12);
    // ambient gradient of u o p on the surface is the tangential gradient
    const Vec3 x = torus_embed(c, torus);
    Vec3 fd;
    for (int d = 0; d < 3; ++d) {
      Vec3 e = Vec3::Zero();
      e[d] = step;
      fd[d] = (problem.solution(x + e) - problem.solution(x - e)) / (2 * step);
    }
    EXPECT_LT((fd - g).norm(), 1e-6);
    EXPECT_LT((problem.solution_gradient(x) - g).norm(), 1e-12);
  }
}

TEST(ExactConormal, TangentOrthogonalAndOutward) {
  const auto b = BoundarySpec::wavy(torus);
  for (auto side : {BoundarySide::lower, BoundarySide::upper}) {
    for (double th = 0.1; th < two_pi; th += 0.37) {
      const Vec3 nu = boundary_conormal_exact(side, th, b, torus);
      const ToroidalCoords c{th, boundary_phi(side, th, b)};
      constexpr double e = 1e-6;
      const Vec3 tangent = boundary_curve(side, th + e, b, torus) - boundary_curve(side, th - e, b, torus);
      EXPECT_NEAR(nu.norm(), 1.0, 1e-14);
      EXPECT_NEAR(nu.dot(surface_normal(c)), 0.0, 1e-12);
      EXPECT_NEAR(nu.dot(tangent.normalized()), 0.0, 1e-9);
      // stepping along nu leaves the band
      const Vec3 out = closest_point(torus_embed(c, torus) + 1e-4 * nu, torus);
      const double phi = toroidal_coords(out, torus).phi;
      const double th_out = toroidal_coords(out, torus).theta;
      const double lo = boundary_phi(BoundarySide::lower, th_out, b);
      const double hi = boundary_phi(BoundarySide::upper, th_out, b);
      const double phi_cover = phi < lo - pi ? phi + two_pi : phi;
      EXPECT_TRUE(phi_cover < lo || phi_cover > hi) << th;
    }
  }
}

TEST(FlatSquareProblem, SolutionLoadConsistency) {
  for (int degree = 0; degree <= 3; ++degree) {
    const FlatSquareProblem p(degree);
    const Vec3 x{0.3, 0.7, 0.0};
    constexpr double e = 1e-4;
    const double lap = (p.solution(x + Vec3(e, 0, 0)) + p.solution(x - Vec3(e, 0, 0)) + p.solution(x + Vec3(0, e, 0)) +
                        p.solution(x - Vec3(0, e, 0)) - 4 * p.solution(x)) /
                       (e * e);
    EXPECT_NEAR(-lap, p.load(x), 1e-5) << degree;
  }
  EXPECT_THROW(FlatSquareProblem(4), Error);
}
