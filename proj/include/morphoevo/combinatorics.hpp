#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>

namespace morphoevo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Chance that a given exponent combination is permitted, given that the
/// pivot combination is, when exactly k of the m*n combinations of two cells
/// occur and every exponent of either cell occurs at least once.
struct ContingencyProbabilities {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    /// Arrangements containing the pivot.
    BigInt N;
    /// Same cell-1 exponent as the pivot, different cell-2 exponent.
    Rational p_i;
    /// Same cell-2 exponent as the pivot, different cell-1 exponent.
    Rational p_j;
    /// Shares neither exponent with the pivot.
    Rational p_0;
};

/// C(a, b), zero when b < 0 or b > a.
BigInt binomial(long long a, long long b);

/// True when max(m, n) <= k < m*n with m, n >= 1.
bool feasible(std::size_t m, std::size_t n, std::size_t k);

/// Inclusion-exclusion evaluation. Throws ConfigError when infeasible.
ContingencyProbabilities contingency_probabilities(std::size_t m, std::size_t n, std::size_t k);

struct BruteForceCounts {
    BigInt N;
    BigInt same_row;
    BigInt same_col;
    BigInt other;
    /// Every position of a class was contained in the same number of subsets.
    bool class_uniform = true;
};

/// Enumerates every k-subset of the m x n grid that contains (0,0) and covers
/// every row and column. Throws ConfigError when infeasible or m*n > 25.
BruteForceCounts brute_force_counts(std::size_t m, std::size_t n, std::size_t k);

struct InequalityCheck {
    /// 1 > p_0 >= p_i and p_0 >= p_j.
    bool holds = false;
    /// 1 > p_0 > p_i and p_0 > p_j.
    bool strict = false;
};

InequalityCheck check_inequality(std::size_t m, std::size_t n, std::size_t k);

} // namespace morphoevo
