#include "morphoevo/combinatorics.hpp"

#include "morphoevo/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace morphoevo {

namespace {

void require_feasible(std::size_t m, std::size_t n, std::size_t k)
{
    if (!feasible(m, n, k))
        throw ConfigError("infeasible table: m=" + std::to_string(m) + " n=" + std::to_string(n) +
                          " k=" + std::to_string(k) + " (need max(m,n) <= k < m*n)");
}

/// sum_{r<=rows} sum_{s<=cols} (-1)^(r+s) C(rows,r) C(cols,s) C((m-r)(n-s)-fixed, k-fixed)
BigInt alternating_sum(long long m, long long n, long long rows, long long cols, long long k, long long fixed)
{
    BigInt total = 0;
    for (long long r = 0; r <= rows; ++r) {
        for (long long s = 0; s <= cols; ++s) {
            BigInt term = binomial(rows, r) * binomial(cols, s) * binomial((m - r) * (n - s) - fixed, k - fixed);
            if ((r + s) % 2 == 0)
                total += term;
            else
                total -= term;
        }
    }
    return total;
}

} // namespace

BigInt binomial(long long a, long long b)
{
    if (b < 0 || a < 0 || b > a)
        return 0;
    if (b > a - b)
        b = a - b;
    BigInt result = 1;
    for (long long i = 1; i <= b; ++i) {
        result *= a - b + i;
        result /= i;
    }
    return result;
}

bool feasible(std::size_t m, std::size_t n, std::size_t k)
{
    return m >= 1 && n >= 1 && k >= std::max(m, n) && k < m * n;
}

ContingencyProbabilities contingency_probabilities(std::size_t m, std::size_t n, std::size_t k)
{
    require_feasible(m, n, k);
    const auto M = static_cast<long long>(m);
    const auto Nn = static_cast<long long>(n);
    const auto K = static_cast<long long>(k);

    ContingencyProbabilities out;
    out.m = m;
    out.n = n;
    out.k = k;
    // The pivot's row and column are always covered, so only the other
    // m-1 rows and n-1 columns enter the exclusion terms.
    out.N = alternating_sum(M, Nn, M - 1, Nn - 1, K, 1);
    const Rational denom(out.N);
    out.p_i = Rational(alternating_sum(M, Nn, M - 1, Nn - 2, K, 2)) / denom;
    out.p_j = Rational(alternating_sum(M, Nn, M - 2, Nn - 1, K, 2)) / denom;
    out.p_0 = Rational(alternating_sum(M, Nn, M - 2, Nn - 2, K, 2)) / denom;
    return out;
}

BruteForceCounts brute_force_counts(std::size_t m, std::size_t n, std::size_t k)
{
    require_feasible(m, n, k);
    if (m * n > 25)
        throw ConfigError("brute-force enumeration is limited to m*n <= 25");

    const std::size_t cells = m * n;
    std::uint32_t all_rows = (1u << m) - 1;
    std::uint32_t all_cols = (1u << n) - 1;
    std::vector<std::uint32_t> row_bit(cells);
    std::vector<std::uint32_t> col_bit(cells);
    for (std::size_t p = 0; p < cells; ++p) {
        row_bit[p] = 1u << (p / n);
        col_bit[p] = 1u << (p % n);
    }

    std::vector<std::uint64_t> hits(cells, 0);
    std::uint64_t total = 0;
    // Position 0 is the pivot; choose the remaining k-1 from the others.
    // Gosper's hack walks the (k-1)-subsets of positions 1..cells-1.
    const std::size_t rest = cells - 1;
    const std::size_t pick = k - 1;
    std::uint32_t subset = (pick == 0) ? 0 : ((1u << pick) - 1);
    const std::uint32_t limit = 1u << rest;
    while (subset < limit) {
        std::uint32_t rows = row_bit[0];
        std::uint32_t cols = col_bit[0];
        for (std::uint32_t bits = subset; bits != 0; bits &= bits - 1) {
            const auto p = static_cast<std::size_t>(std::countr_zero(bits)) + 1;
            rows |= row_bit[p];
            cols |= col_bit[p];
        }
        if (rows == all_rows && cols == all_cols) {
            ++total;
            for (std::uint32_t bits = subset; bits != 0; bits &= bits - 1)
                ++hits[static_cast<std::size_t>(std::countr_zero(bits)) + 1];
        }
        if (subset == 0)
            break;
        const std::uint32_t low = subset & -subset;
        const std::uint32_t ripple = subset + low;
        subset = (((ripple ^ subset) >> 2) / low) | ripple;
    }

    BruteForceCounts out;
    out.N = total;
    std::optional<std::uint64_t> row_count;
    std::optional<std::uint64_t> col_count;
    std::optional<std::uint64_t> other_count;
    auto record = [&](std::optional<std::uint64_t>& slot, std::uint64_t value) {
        if (slot && *slot != value)
            out.class_uniform = false;
        if (!slot)
            slot = value;
    };
    for (std::size_t p = 1; p < cells; ++p) {
        const bool same_row = p / n == 0;
        const bool same_col = p % n == 0;
        if (same_row)
            record(row_count, hits[p]);
        else if (same_col)
            record(col_count, hits[p]);
        else
            record(other_count, hits[p]);
    }
    out.same_row = row_count.value_or(0);
    out.same_col = col_count.value_or(0);
    out.other = other_count.value_or(0);
    return out;
}

InequalityCheck check_inequality(std::size_t m, std::size_t n, std::size_t k)
{
    const auto p = contingency_probabilities(m, n, k);
    InequalityCheck out;
    out.holds = p.p_0 < 1 && p.p_0 >= p.p_i && p.p_0 >= p.p_j;
    out.strict = p.p_0 < 1 && p.p_0 > p.p_i && p.p_0 > p.p_j;
    return out;
}

} // namespace morphoevo
