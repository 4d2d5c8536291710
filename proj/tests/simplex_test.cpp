#include "noarb/simplex.hpp"

#include <gtest/gtest.h>

namespace noarb::lp {
namespace {

TEST(Simplex, TextbookMaximization) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  Problem p;
  p.variables = 2;
  p.objective = {3.0, 5.0};
  p.constraints = {{{1, 0}, Relation::LessEqual, 4},
                   {{0, 2}, Relation::LessEqual, 12},
                   {{3, 2}, Relation::LessEqual, 18}};
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.x[0], 2.0, 1e-12);
  EXPECT_NEAR(s.x[1], 6.0, 1e-12);
  EXPECT_NEAR(s.objective, 36.0, 1e-12);
}

TEST(Simplex, NeedsPhaseOneForGreaterEqualRows) {
  // max -x - y, x + y >= 2, x - y = 0 -> (1, 1)
  Problem p;
  p.variables = 2;
  p.objective = {-1.0, -1.0};
  p.constraints = {{{1, 1}, Relation::GreaterEqual, 2}, {{1, -1}, Relation::Equal, 0}};
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.x[1], 1.0, 1e-12);
}

TEST(Simplex, DetectsInfeasibility) {
  Problem p;
  p.variables = 1;
  p.constraints = {{{1}, Relation::GreaterEqual, 3}, {{1}, Relation::LessEqual, 1}};
  const Solution s = solve(p);
  EXPECT_EQ(s.status, Status::Infeasible);
  EXPECT_GT(s.infeasibility, 0.0);
}

TEST(Simplex, DetectsUnboundedness) {
  Problem p;
  p.variables = 2;
  p.objective = {1.0, 0.0};
  p.constraints = {{{1, -1}, Relation::LessEqual, 1}};
  EXPECT_EQ(solve(p).status, Status::Unbounded);
}

TEST(Simplex, NegativeRightHandSideIsFlipped) {
  // -x <= -2  <=>  x >= 2; minimize x
  Problem p;
  p.variables = 1;
  p.objective = {-1.0};
  p.constraints = {{{-1}, Relation::LessEqual, -2}};
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.x[0], 2.0, 1e-12);
}

TEST(Simplex, BealeCyclingExampleTerminatesUnderBland) {
  // Beale's classic degenerate LP cycles with the textbook largest-coefficient
  // rule; Bland's rule must terminate at the optimum 1/20.
  Problem p;
  p.variables = 4;
  p.objective = {0.75, -150.0, 0.02, -6.0};
  p.constraints = {{{0.25, -60.0, -0.04, 9.0}, Relation::LessEqual, 0.0},
                   {{0.5, -90.0, -0.02, 3.0}, Relation::LessEqual, 0.0},
                   {{0.0, 0.0, 1.0, 0.0}, Relation::LessEqual, 1.0}};
  for (bool reverse : {false, true}) {
    Options opt;
    opt.reverse_column_order = reverse;
    const Solution s = solve(p, opt);
    ASSERT_EQ(s.status, Status::Optimal) << "reverse=" << reverse;
    EXPECT_NEAR(s.objective, 0.05, 1e-12);
  }
}

TEST(Simplex, IterationCapIsReported) {
  Problem p;
  p.variables = 2;
  p.objective = {3.0, 5.0};
  p.constraints = {{{1, 0}, Relation::LessEqual, 4},
                   {{0, 2}, Relation::LessEqual, 12},
                   {{3, 2}, Relation::LessEqual, 18}};
  Options opt;
  opt.max_iterations = 1;
  EXPECT_EQ(solve(p, opt).status, Status::IterationLimit);
}

}  // namespace
}  // namespace noarb::lp
