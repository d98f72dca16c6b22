#include "morphoevo/errors.hpp"
#include "morphoevo/sampling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

using namespace morphoevo;

TEST(Zipf, ThreeItems)
{
    const auto w = zipf_weights(3, 1.0);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_NEAR(w[0], 6.0 / 11.0, 1e-15);
    EXPECT_NEAR(w[1], 3.0 / 11.0, 1e-15);
    EXPECT_NEAR(w[2], 2.0 / 11.0, 1e-15);
}

TEST(Zipf, SingleItemAndErrors)
{
    EXPECT_EQ(zipf_weights(1, 2.0), std::vector<double>{1.0});
    EXPECT_THROW(zipf_weights(0, 1.0), ConfigError);
    EXPECT_THROW(zipf_weights(3, 0.0), ConfigError);
}

TEST(Zipf, DisabledSpecIsUniform)
{
    for (auto w : item_weights(ZipfSpec{}, 7))
        EXPECT_DOUBLE_EQ(w, 1.0 / 7.0);
}

TEST(Zipf, StrictlyDecreasingAndNormalized)
{
    for (double s : {0.3, 1.0, 2.5})
        for (std::size_t n : {2u, 8u, 100u}) {
            const auto w = zipf_weights(n, s);
            EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
            for (std::size_t i = 1; i < n; ++i)
                EXPECT_LT(w[i], w[i - 1]);
        }
}

TEST(Zipf, RankPermutationIsBijection)
{
    ZipfSpec spec{true, 1.0, 77};
    auto rank = rank_assignment(spec, 50);
    std::set<std::size_t> seen(rank.begin(), rank.end());
    EXPECT_EQ(seen.size(), 50u);
    EXPECT_EQ(*seen.rbegin(), 49u);
    EXPECT_EQ(rank, rank_assignment(spec, 50));
    auto identity = rank_assignment(ZipfSpec{true, 1.0, std::nullopt}, 5);
    EXPECT_EQ(identity, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    // Permuted weights are the same multiset.
    auto w = item_weights(spec, 50);
    std::sort(w.begin(), w.end(), std::greater<>());
    const auto z = zipf_weights(50, 1.0);
    for (std::size_t i = 0; i < 50; ++i)
        EXPECT_DOUBLE_EQ(w[i], z[i]);
}

TEST(SampleCount, CeilingOfFraction)
{
    EXPECT_EQ(sample_count(1.0, 99), 99u);
    EXPECT_EQ(sample_count(0.5, 99), 50u);
    EXPECT_EQ(sample_count(0.2, 99), 20u);
    EXPECT_EQ(sample_count(0.001, 99), 1u);
    EXPECT_EQ(sample_count(6.0 / 7.0, 7), 6u);
    EXPECT_EQ(sample_count(0.5, 0), 0u);
    EXPECT_THROW(sample_count(0.0, 10), ConfigError);
    EXPECT_THROW(sample_count(1.5, 10), ConfigError);
}

TEST(WeightedSampling, ExhaustiveDrawReturnsAll)
{
    Rng rng(1);
    const std::vector<double> w(6, 1.0);
    auto out = sample_without_replacement(w, 6, rng);
    std::sort(out.begin(), out.end());
    EXPECT_EQ(out, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
}

TEST(WeightedSampling, RejectsBadInput)
{
    Rng rng(1);
    EXPECT_THROW(sample_without_replacement(std::vector<double>{1.0, 0.0}, 1, rng), ConfigError);
    EXPECT_THROW(sample_without_replacement(std::vector<double>{1.0, 1.0}, 3, rng), ConfigError);
}

TEST(WeightedSampling, NeverRepeats)
{
    Rng rng(2);
    const auto w = zipf_weights(30, 1.2);
    for (int trial = 0; trial < 500; ++trial) {
        const auto m = static_cast<std::size_t>(1 + trial % 30);
        auto out = sample_without_replacement(w, m, rng);
        ASSERT_EQ(out.size(), m);
        std::set<std::size_t> uniq(out.begin(), out.end());
        ASSERT_EQ(uniq.size(), m);
    }
}

TEST(WeightedSampling, HeavyItemFrequency)
{
    Rng rng(2024);
    const std::vector<double> w{0.9, 0.05, 0.05};
    int zero = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t)
        zero += sample_without_replacement(w, 1, rng)[0] == 0;
    const double sigma = std::sqrt(trials * 0.9 * 0.1);
    EXPECT_NEAR(zero, 9000, 3 * sigma);
}

TEST(WeightedSampling, SecondDrawFollowsRemovalRule)
{
    // P(1 in a 2-draw from (0.5,0.3,0.2)) = 0.3 + 0.5*0.3/0.5 + 0.2*0.3/0.8 = 0.675
    Rng rng(77);
    const std::vector<double> w{0.5, 0.3, 0.2};
    int hits = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        auto out = sample_without_replacement(w, 2, rng);
        hits += out[0] == 1 || out[1] == 1;
    }
    const double p = 0.3 + 0.5 * 0.3 / 0.5 + 0.2 * 0.3 / 0.8;
    EXPECT_NEAR(hits, trials * p, 4 * std::sqrt(trials * p * (1 - p)));
}

TEST(Focus, ReciprocalProbabilities)
{
    const auto p = focus_probabilities(zipf_weights(3, 1.0));
    EXPECT_NEAR(p[0], 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(p[2], 1.0 / 2.0, 1e-12);

    Rng rng(5);
    std::array<int, 3> counts{};
    const auto w = zipf_weights(3, 1.0);
    const int trials = 30000;
    for (int t = 0; t < trials; ++t)
        ++counts[choose_focus(w, rng)];
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_NEAR(counts[i], trials * p[i], 4 * std::sqrt(trials * p[i] * (1 - p[i])));
}

TEST(Focus, UniformAndSingle)
{
    for (auto p : focus_probabilities(std::vector<double>(4, 0.25)))
        EXPECT_DOUBLE_EQ(p, 0.25);
    Rng rng(1);
    EXPECT_EQ(choose_focus(std::vector<double>{1.0}, rng), 0u);
    EXPECT_THROW(focus_probabilities(std::vector<double>{}), ConfigError);
}

TEST(Determinism, SeedReplaysDraws)
{
    const auto w = zipf_weights(20, 1.0);
    Rng a(99);
    Rng b(99);
    for (int i = 0; i < 50; ++i)
        EXPECT_EQ(sample_without_replacement(w, 5, a), sample_without_replacement(w, 5, b));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Rng, IndexIsUniform)
{
    Rng rng(123);
    std::array<int, 7> counts{};
    const int trials = 70000;
    for (int t = 0; t < trials; ++t)
        ++counts[rng.index(7)];
    for (auto c : counts)
        EXPECT_NEAR(c, trials / 7.0, 4 * std::sqrt(trials * (1.0 / 7) * (6.0 / 7)));
    for (int t = 0; t < 1000; ++t) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}
