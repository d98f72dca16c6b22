#include "morphoevo/sampling.hpp"

#include "morphoevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace morphoevo {

std::vector<double> zipf_weights(std::size_t n, double s)
{
    if (n == 0)
        throw ConfigError("zipf_weights needs at least one item");
    if (!(s > 0.0))
        throw ConfigError("Zipf exponent must be positive");
    std::vector<double> weights(n);
    for (std::size_t r = 0; r < n; ++r)
        weights[r] = std::pow(static_cast<double>(r + 1), -s);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights)
        w /= total;
    return weights;
}

std::vector<std::size_t> rank_assignment(const ZipfSpec& spec, std::size_t n)
{
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    if (spec.rank_permutation_seed) {
        Rng rng(*spec.rank_permutation_seed);
        for (std::size_t i = n; i > 1; --i)
            std::swap(rank[i - 1], rank[rng.index(i)]);
    }
    return rank;
}

std::vector<double> item_weights(const ZipfSpec& spec, std::size_t n)
{
    if (n == 0)
        throw ConfigError("item_weights needs at least one item");
    if (!spec.enabled)
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    const auto by_rank = zipf_weights(n, spec.s);
    const auto rank = rank_assignment(spec, n);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i)
        weights[i] = by_rank[rank[i]];
    return weights;
}

std::size_t sample_count(double fraction, std::size_t available)
{
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ConfigError("evidence fraction must lie in (0, 1]");
    if (available == 0)
        return 0;
    // The slack keeps exact products such as (6/7)*7 from rounding up.
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(available) - 1e-9));
    return std::clamp<std::size_t>(count, 1, available);
}

void sample_without_replacement(std::span<const double> weights, std::size_t m, Rng& rng,
                                std::vector<std::size_t>& out, std::vector<double>& scratch)
{
    if (m > weights.size())
        throw ConfigError("cannot draw " + std::to_string(m) + " distinct items from " +
                          std::to_string(weights.size()));
    scratch.assign(weights.begin(), weights.end());
    double total = 0.0;
    for (double w : scratch) {
        if (!(w > 0.0))
            throw ConfigError("sampling weights must be positive");
        total += w;
    }
    out.clear();
    for (std::size_t draw = 0; draw < m; ++draw) {
        double target = rng.uniform() * total;
        std::size_t pick = scratch.size();
        std::size_t last_live = scratch.size();
        for (std::size_t i = 0; i < scratch.size(); ++i) {
            if (scratch[i] == 0.0)
                continue;
            last_live = i;
            if (target < scratch[i]) {
                pick = i;
                break;
            }
            target -= scratch[i];
        }
        // Rounding can exhaust the scan; fall back to the last live item.
        if (pick == scratch.size())
            pick = last_live;
        out.push_back(pick);
        total -= scratch[pick];
        scratch[pick] = 0.0;
        if (total <= 0.0) {
            total = 0.0;
            for (double w : scratch)
                total += w;
        }
    }
}

std::vector<std::size_t> sample_without_replacement(std::span<const double> weights, std::size_t m,
                                                    Rng& rng)
{
    std::vector<std::size_t> out;
    std::vector<double> scratch;
    sample_without_replacement(weights, m, rng, out, scratch);
    return out;
}

std::vector<double> focus_probabilities(std::span<const double> weights)
{
    if (weights.empty())
        throw ConfigError("cannot choose a focus from no items");
    std::vector<double> inverse(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw ConfigError("focus weights must be positive");
        inverse[i] = 1.0 / weights[i];
        total += inverse[i];
    }
    for (auto& p : inverse)
        p /= total;
    return inverse;
}

std::size_t choose_focus(std::span<const double> weights, Rng& rng)
{
    if (weights.size() == 1)
        return 0;
    return DiscreteDistribution(focus_probabilities(weights))(rng);
}

DiscreteDistribution::DiscreteDistribution(std::span<const double> weights)
{
    cumulative_.reserve(weights.size());
    double running = 0.0;
    for (double w : weights) {
        if (w < 0.0)
            throw ConfigError("negative weight");
        running += w;
        cumulative_.push_back(running);
    }
    if (!(running > 0.0))
        throw ConfigError("weights must have a positive sum");
}

std::size_t DiscreteDistribution::operator()(Rng& rng) const
{
    const double target = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end())
        --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

} // namespace morphoevo
