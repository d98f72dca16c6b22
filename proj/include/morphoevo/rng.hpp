#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace morphoevo {

__extension__ using uint128 = unsigned __int128;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of run `run_id` in a batch keyed by `master_seed`. Depends only on
/// the pair, so any execution order yields the same per-run streams.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_id) noexcept
{
    return splitmix64(splitmix64(master_seed) ^ splitmix64(run_id + 0x632be59bd9b4e019ULL));
}

/// Random stream owned by one simulation run.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Bounded integers and reals are derived here rather than through
/// std::uniform_*_distribution, whose algorithms are implementation-defined,
/// so a seed replays the same draws on every toolchain.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n)
    {
        // Lemire's multiply-shift with rejection.
        const auto bound = static_cast<std::uint64_t>(n);
        auto product = static_cast<uint128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<uint128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::size_t>(product >> 64);
    }

    /// Uniform real in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

} // namespace morphoevo
