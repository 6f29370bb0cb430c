#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace surfnitsche;

TEST(SolveSpd, Identity) {
  const auto a = CsrMatrix::from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const std::vector<double> b{3.0, -1.0, 2.5};
  const auto r = solve_spd(a, b);
  EXPECT_LE(r.iterations, 1);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(r.solution[i], b[i]);
}

TEST(SolveSpd, TwoByTwo) {
  const auto a = CsrMatrix::from_dense({{2, 1}, {1, 2}});
  const std::vector<double> b{3.0, 3.0};
  const auto r = solve_spd(a, b);
  EXPECT_NEAR(r.solution[0], 1.0, 1e-14);
  EXPECT_NEAR(r.solution[1], 1.0, 1e-14);
  EXPECT_EQ(r.method, SolveMethod::iterative);
}

TEST(SolveSpd, RandomSpdMatchesDenseCholesky) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto dense = oracle::random_spd(200, seed);
    const auto a = CsrMatrix::from_dense(dense);
    std::vector<double> b(200);
    for (int i = 0; i < 200; ++i) b[i] = std::sin(0.3 * i + seed);
    const auto cg = solve_spd(a, b, {.refine_small = false});
    EXPECT_FALSE(cg.refined);
    const auto chol = dense_cholesky_solve(to_dense(a), 200, b);
    for (int i = 0; i < 200; ++i) EXPECT_NEAR(cg.solution[i], chol[i], 1e-8);
    EXPECT_LE(relative_residual(a, cg.solution, b), 1e-12);
    EXPECT_EQ(cg.relative_residual, relative_residual(a, cg.solution, b));
  }
}

TEST(SolveSpd, RefinementSharpensPenaltyScaledSystem) {
  const FlatSquareProblem flat(2);
  const auto mesh = build_mesh(4, 2, flat);
  const auto sys = assemble(mesh, flat);
  const auto exact = interpolate_solution(mesh, flat);
  const auto plain = solve_spd(sys.matrix, sys.rhs, {.refine_small = false});
  const auto sharp = solve_spd(sys.matrix, sys.rhs);
  EXPECT_TRUE(sharp.refined);
  EXPECT_EQ(sharp.iterations, plain.iterations);
  EXPECT_LE(sharp.relative_residual, plain.relative_residual);
  double e_plain = 0.0, e_sharp = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    e_plain = std::max(e_plain, std::abs(plain.solution[i] - exact[i]));
    e_sharp = std::max(e_sharp, std::abs(sharp.solution[i] - exact[i]));
  }
  EXPECT_LT(e_sharp, 1e-10);
  EXPECT_LE(e_sharp, e_plain);
}

TEST(SolveSpd, Deterministic) {
  const auto a = CsrMatrix::from_dense(oracle::random_spd(60, 9));
  std::vector<double> b(60, 1.0);
  const auto r1 = solve_spd(a, b);
  const auto r2 = solve_spd(a, b);
  EXPECT_EQ(r1.solution, r2.solution);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(SolveSpd, ZeroRightHandSide) {
  const auto a = CsrMatrix::from_dense({{2, 1}, {1, 2}});
  const auto r = solve_spd(a, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(r.solution, (std::vector<double>{0.0, 0.0}));
}

TEST(SolveSpd, IndefiniteRejected) {
  const auto a = CsrMatrix::from_dense({{1, 2}, {2, 1}});
  try {
    solve_spd(a, std::vector<double>{1.0, -1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_positive_definite);
  }
  EXPECT_THROW(dense_cholesky_solve(to_dense(a), 2, std::vector<double>{1.0, 0.0}), Error);
  EXPECT_FALSE(band_cholesky_succeeds(a));
  EXPECT_TRUE(band_cholesky_succeeds(CsrMatrix::from_dense({{2, 1}, {1, 2}})));
}

TEST(SolveSpd, InvalidTolerance) {
  const auto a = CsrMatrix::from_dense({{1}});
  for (double tol : {0.0, 1.0, -1e-3}) {
    EXPECT_THROW(solve_spd(a, std::vector<double>{1.0}, {.rel_tol = tol}), Error);
  }
}

TEST(SolveSpd, IterationCapFallsBackToCholesky) {
  const auto a = CsrMatrix::from_dense(oracle::random_spd(40, 4));
  const std::vector<double> b(40, 1.0);
  const auto r = solve_spd(a, b, {.max_iterations = 2});
  EXPECT_EQ(r.method, SolveMethod::direct);
  EXPECT_LE(r.relative_residual, 1e-12);
}

TEST(SolveSpd, IterationCapWithoutFallback) {
  const auto a = CsrMatrix::from_dense(oracle::random_spd(40, 4));
  const std::vector<double> b(40, 1.0);
  try {
    solve_spd(a, b, {.max_iterations = 2, .dense_fallback_limit = 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::max_iterations_exceeded);
  }
}

TEST(CsrMatrix, TripletsSumInInsertionOrder) {
  std::vector<Triplet> t{{0, 0, 1.0}, {1, 0, 2.0}, {0, 0, 3.0}, {0, 1, 2.0}, {1, 1, 5.0}};
  const auto a = CsrMatrix::from_triplets(2, 2, t);
  EXPECT_EQ(a.nonzeros(), 4u);
  EXPECT_EQ(a.at(0, 0), 4.0);
  EXPECT_EQ(a.at(1, 0), 2.0);
  EXPECT_EQ(a.asymmetry(), 0.0);
  EXPECT_EQ(a.bandwidth(), 1);
}
