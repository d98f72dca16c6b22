#pragma once

#include "morphoevo/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace morphoevo {

/// Frequency skew over a set of items (lexemes or cells).
struct ZipfSpec {
    bool enabled = false;
    /// Rank exponent; weight of rank r is proportional to r^-s.
    double s = 1.0;
    /// nullopt: item i has rank i (item 0 most frequent). Otherwise ranks are
    /// a permutation shuffled by a stream seeded with this value.
    std::optional<std::uint64_t> rank_permutation_seed;

    friend bool operator==(const ZipfSpec&, const ZipfSpec&) = default;
};

/// How much evidence one cell-filling step gathers.
struct SamplePlan {
    /// Fraction of the non-focal evidence items sampled, in (0, 1].
    double evidence_fraction = 1.0;
    /// Pivot cells (rhizomorphome) or pivot lexemes (metamorphome).
    std::size_t num_pivots = 1;
    ZipfSpec lexeme_zipf;
    ZipfSpec cell_zipf;
    /// Draw a fresh evidence sample for every pivot. Default: one sample per
    /// step, shared by all pivots.
    bool per_pivot_resample = false;

    friend bool operator==(const SamplePlan&, const SamplePlan&) = default;
};

/// Normalized weights proportional to r^-s for ranks r = 1..n.
std::vector<double> zipf_weights(std::size_t n, double s);

/// Rank permutation for `n` items: result[item] = zero-based rank.
std::vector<std::size_t> rank_assignment(const ZipfSpec& spec, std::size_t n);

/// Per-item normalized frequency weights; uniform 1/n when the ZipfSpec is disabled.
std::vector<double> item_weights(const ZipfSpec& spec, std::size_t n);

/// ceil(fraction * available), at least 1 and at most `available`.
std::size_t sample_count(double fraction, std::size_t available);

/// m distinct indices drawn by sequential weighted draws with removal.
/// Returned in draw order.
std::vector<std::size_t> sample_without_replacement(std::span<const double> weights, std::size_t m,
                                                    Rng& rng);

/// Same, writing into `out` and reusing `scratch` as the remaining-weight buffer.
void sample_without_replacement(std::span<const double> weights, std::size_t m, Rng& rng,
                                std::vector<std::size_t>& out, std::vector<double>& scratch);

/// Selection probabilities of the focus: reciprocal frequency weights,
/// renormalized, so rarer items are picked more often.
std::vector<double> focus_probabilities(std::span<const double> weights);

/// Draws a focus index with probability given by focus_probabilities().
std::size_t choose_focus(std::span<const double> weights, Rng& rng);

/// Categorical distribution sampled by inverse CDF.
class DiscreteDistribution {
public:
    DiscreteDistribution() = default;
    /// Weights need not be normalized; all must be non-negative with a positive sum.
    explicit DiscreteDistribution(std::span<const double> weights);

    std::size_t operator()(Rng& rng) const;
    std::size_t size() const noexcept { return cumulative_.size(); }
    bool empty() const noexcept { return cumulative_.empty(); }

private:
    std::vector<double> cumulative_;
};

} // namespace morphoevo
