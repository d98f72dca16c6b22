#include "morphoevo/combinatorics.hpp"
#include "morphoevo/errors.hpp"

#include <gtest/gtest.h>

using namespace morphoevo;

TEST(Binomial, Convention)
{
    EXPECT_EQ(binomial(5, 2), 10);
    EXPECT_EQ(binomial(5, -1), 0);
    EXPECT_EQ(binomial(5, 6), 0);
    EXPECT_EQ(binomial(0, 0), 1);
    EXPECT_EQ(binomial(-1, 0), 0);
    EXPECT_EQ(binomial(60, 30), BigInt("118264581564861424"));
}

TEST(Contingency, ThreeByThreeWithThree)
{
    const auto p = contingency_probabilities(3, 3, 3);
    EXPECT_EQ(p.N, 2);
    EXPECT_EQ(p.p_i, 0);
    EXPECT_EQ(p.p_j, 0);
    EXPECT_EQ(p.p_0, Rational(1, 2));
}

TEST(Contingency, ThreeByThreeWithFour)
{
    const auto p = contingency_probabilities(3, 3, 4);
    EXPECT_EQ(p.N, 20);
    EXPECT_EQ(p.p_i, Rational(1, 4));
    EXPECT_EQ(p.p_j, Rational(1, 4));
    EXPECT_EQ(p.p_0, Rational(1, 2));
}

TEST(Contingency, TwoByTwoWithTwo)
{
    const auto p = contingency_probabilities(2, 2, 2);
    EXPECT_EQ(p.N, 1);
    EXPECT_EQ(p.p_i, 0);
    EXPECT_EQ(p.p_j, 0);
    EXPECT_EQ(p.p_0, 1);
}

TEST(Contingency, RejectsInfeasible)
{
    EXPECT_THROW(contingency_probabilities(3, 3, 2), ConfigError);
    EXPECT_THROW(contingency_probabilities(3, 3, 9), ConfigError);
    EXPECT_THROW(contingency_probabilities(0, 3, 3), ConfigError);
    EXPECT_THROW(brute_force_counts(5, 6, 10), ConfigError);
}

TEST(BruteForce, Examples)
{
    EXPECT_EQ(brute_force_counts(3, 3, 4).N, 20);
    const auto three = brute_force_counts(3, 3, 3);
    EXPECT_EQ(three.N, 2);
    EXPECT_EQ(three.same_row, 0);
    EXPECT_EQ(three.same_col, 0);
    EXPECT_EQ(three.other, 1);
    const auto oracle = brute_force_counts(4, 3, 5);
    const auto p = contingency_probabilities(4, 3, 5);
    EXPECT_EQ(oracle.N, p.N);
    EXPECT_EQ(Rational(oracle.same_row), p.p_i * Rational(p.N));
    EXPECT_EQ(Rational(oracle.same_col), p.p_j * Rational(p.N));
    EXPECT_EQ(Rational(oracle.other), p.p_0 * Rational(p.N));
}

TEST(Contingency, FormulaMatchesEnumeration)
{
    for (std::size_t m = 1; m <= 5; ++m)
        for (std::size_t n = 1; n <= 5; ++n) {
            if (m * n > 20)
                continue;
            for (std::size_t k = 1; k < m * n; ++k) {
                if (!feasible(m, n, k))
                    continue;
                const auto p = contingency_probabilities(m, n, k);
                const auto oracle = brute_force_counts(m, n, k);
                SCOPED_TRACE(testing::Message() << m << "x" << n << " k=" << k);
                ASSERT_TRUE(oracle.class_uniform);
                ASSERT_EQ(oracle.N, p.N);
                const Rational N(oracle.N);
                ASSERT_EQ(Rational(oracle.same_row) / N, p.p_i);
                ASSERT_EQ(Rational(oracle.same_col) / N, p.p_j);
                ASSERT_EQ(Rational(oracle.other) / N, p.p_0);
            }
        }
}

TEST(Contingency, RowColumnDuality)
{
    for (std::size_t m = 2; m <= 7; ++m)
        for (std::size_t n = 2; n <= 7; ++n)
            for (std::size_t k = std::max(m, n); k < m * n; ++k) {
                const auto p = contingency_probabilities(m, n, k);
                const auto q = contingency_probabilities(n, m, k);
                ASSERT_EQ(p.N, q.N);
                ASSERT_EQ(p.p_i, q.p_j);
                ASSERT_EQ(p.p_0, q.p_0);
            }
}

TEST(Inequality, Examples)
{
    const auto four = check_inequality(3, 3, 4);
    EXPECT_TRUE(four.holds);
    EXPECT_TRUE(four.strict);
    const auto three = check_inequality(3, 3, 3);
    EXPECT_TRUE(three.holds);
    EXPECT_TRUE(three.strict);
}

TEST(Inequality, SweepUpToFour)
{
    // p_0 >= p_i, p_j everywhere; the only completion of the 2x2 table with
    // two entries is the opposite corner, so there p_0 = 1.
    std::size_t cases = 0;
    for (std::size_t m = 1; m <= 4; ++m)
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::size_t k = 1; k < m * n; ++k) {
                if (!feasible(m, n, k))
                    continue;
                ++cases;
                const auto p = contingency_probabilities(m, n, k);
                EXPECT_GE(p.p_0, p.p_i);
                EXPECT_GE(p.p_0, p.p_j);
                const bool forced = m == 2 && n == 2 && k == 2;
                EXPECT_EQ(check_inequality(m, n, k).holds, !forced) << m << "x" << n << " k=" << k;
            }
    EXPECT_EQ(cases, 50u);
    EXPECT_EQ(contingency_probabilities(2, 2, 2).p_0, 1);
}
