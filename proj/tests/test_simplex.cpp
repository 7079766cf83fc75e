#include "hypack/simplex.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

using namespace hypack;
using oracle::random_bounded_lp;
using oracle::vertex_enumeration;

namespace {

LinearProgram one_variable(double c) {
    LinearProgram lp;
    lp.objective = {c};
    return lp;
}

}  // namespace

TEST(Simplex, ToyLowerBound) {
    LinearProgram lp = one_variable(1.0);
    lp.add_row({-1.0}, RowSense::less_equal, -1.0);  // x >= 1
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.x[0], 1.0, 1e-12);
    EXPECT_NEAR(s.objective, 1.0, 1e-12);
    EXPECT_LE(s.residual, 1e-12);
}

TEST(Simplex, InfeasibleSystem) {
    LinearProgram lp = one_variable(1.0);
    lp.add_row({1.0}, RowSense::less_equal, -1.0);
    lp.add_row({-1.0}, RowSense::less_equal, -1.0);
    EXPECT_EQ(solve_lp(lp).status, LpStatus::infeasible);
}

TEST(Simplex, InfeasibleEvenWithoutObjective) {
    LinearProgram lp = one_variable(0.0);
    lp.add_row({1.0}, RowSense::less_equal, -1.0);
    lp.add_row({-1.0}, RowSense::less_equal, -1.0);
    EXPECT_EQ(solve_lp(lp).status, LpStatus::infeasible);
}

TEST(Simplex, Unbounded) {
    LinearProgram lp = one_variable(-1.0);
    lp.add_row({-1.0}, RowSense::less_equal, 0.0);  // x >= 0, minimize -x
    EXPECT_EQ(solve_lp(lp).status, LpStatus::unbounded);
}

TEST(Simplex, EqualityRow) {
    LinearProgram lp;
    lp.objective = {1.0, 2.0};
    lp.add_row({1.0, 1.0}, RowSense::equal, 3.0);
    lp.add_row({-1.0, 0.0}, RowSense::less_equal, 0.0);
    lp.add_row({0.0, -1.0}, RowSense::less_equal, 0.0);
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.x[0], 3.0, 1e-12);
    EXPECT_NEAR(s.x[1], 0.0, 1e-12);
    EXPECT_NEAR(s.objective, 3.0, 1e-12);
}

TEST(Simplex, IterationLimit) {
    std::mt19937_64 rng(7);
    const LinearProgram lp = random_bounded_lp(rng, 4, 3);
    EXPECT_EQ(solve_lp(lp, {.max_iterations = 1}).status, LpStatus::iteration_limit);
}

TEST(Simplex, RejectsMalformedPrograms) {
    EXPECT_THROW(solve_lp(LinearProgram{}), InvalidInput);
    LinearProgram lp = one_variable(1.0);
    lp.add_row({1.0, 2.0}, RowSense::less_equal, 1.0);
    EXPECT_THROW(solve_lp(lp), InvalidInput);
    LinearProgram nan = one_variable(1.0);
    nan.add_row({std::numeric_limits<double>::quiet_NaN()}, RowSense::less_equal, 1.0);
    EXPECT_THROW(solve_lp(nan), InvalidInput);
}

TEST(Simplex, MatchesVertexEnumeration) {
    std::mt19937_64 rng(20240611);
    int optimal = 0, infeasible = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        const LinearProgram lp = random_bounded_lp(rng, n, 7 - n);
        ASSERT_LE(lp.constraints(), 8u);
        const std::optional<double> oracle = vertex_enumeration(lp);
        const LpSolution s = solve_lp(lp);
        if (!oracle) {
            EXPECT_EQ(s.status, LpStatus::infeasible) << trial;
            ++infeasible;
            continue;
        }
        ASSERT_EQ(s.status, LpStatus::optimal) << trial;
        EXPECT_NEAR(s.objective, *oracle, 1e-8) << trial;
        EXPECT_LE(s.residual, 1e-8);
        ++optimal;
    }
    EXPECT_GT(optimal, 25);
}

TEST(Simplex, Deterministic) {
    std::mt19937_64 rng(3);
    const LinearProgram lp = random_bounded_lp(rng, 5, 2);
    const LpSolution a = solve_lp(lp), b = solve_lp(lp);
    ASSERT_EQ(a.status, b.status);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.x, b.x);
}

TEST(Simplex, DegenerateVertexTerminates) {
    // Many redundant rows through the optimal vertex.
    LinearProgram lp;
    lp.objective = {-1.0, -1.0};
    for (int k = 0; k <= 40; ++k) {
        const double w = static_cast<double>(k) / 40.0;
        lp.add_row({w, 1.0 - w}, RowSense::less_equal, 0.5);
    }
    lp.add_row({-1.0, 0.0}, RowSense::less_equal, 0.0);
    lp.add_row({0.0, -1.0}, RowSense::less_equal, 0.0);
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, -1.0, 1e-10);
}
