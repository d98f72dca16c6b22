#include "morphoevo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace morphoevo {

namespace {

constexpr double kEntropyFloor = 1e-12;

/// sum of c*log2(c) over non-zero counts.
double count_log_sum(const std::vector<std::size_t>& counts)
{
    double sum = 0.0;
    for (auto c : counts)
        if (c > 1)
            sum += static_cast<double>(c) * std::log2(static_cast<double>(c));
    return sum;
}

/// Entropies needed for all pairwise measures, computed once per lexicon.
class PairwiseEntropies {
public:
    explicit PairwiseEntropies(const Lexicon& lexicon) : lexicon_(lexicon)
    {
        const auto cells = lexicon.num_cells();
        n_ = static_cast<double>(lexicon.num_lexemes());
        marginal_log_sum_.resize(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            std::vector<std::size_t> counts(lexicon.inventory_sizes()[c], 0);
            for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
                ++counts[lexicon.at(l, c).value];
            marginal_log_sum_[c] = count_log_sum(counts);
        }
    }

    double entropy(std::size_t x) const { return clean(std::log2(n_) - marginal_log_sum_[x] / n_); }

    double conditional(std::size_t x, std::size_t y) const
    {
        // H(X|Y) = H(X,Y) - H(Y) = (sum_y c log c - sum_xy c log c) / n
        const auto inv_y = lexicon_.inventory_sizes()[y];
        joint_.assign(lexicon_.inventory_sizes()[x] * inv_y, 0);
        for (std::size_t l = 0; l < lexicon_.num_lexemes(); ++l)
            ++joint_[lexicon_.at(l, x).value * inv_y + lexicon_.at(l, y).value];
        const double h = (marginal_log_sum_[y] - count_log_sum(joint_)) / n_;
        return std::min(clean(h), entropy(x));
    }

    double theils_u(std::size_t x, std::size_t y) const
    {
        const double hx = entropy(x);
        if (hx <= kEntropyFloor)
            return 0.0;
        return std::clamp((hx - conditional(x, y)) / hx, 0.0, 1.0);
    }

private:
    static double clean(double h) { return h < kEntropyFloor ? 0.0 : h; }

    const Lexicon& lexicon_;
    double n_ = 0.0;
    std::vector<double> marginal_log_sum_;
    mutable std::vector<std::size_t> joint_;
};

void check_pair(const Lexicon& lexicon, std::size_t x, std::size_t y)
{
    if (x >= lexicon.num_cells() || y >= lexicon.num_cells())
        throw std::out_of_range("cell index out of range");
    if (x == y)
        throw std::invalid_argument("conditional measures need two distinct cells");
}

template <typename Measure>
double mean_over_ordered_pairs(const Lexicon& lexicon, Measure measure)
{
    const auto cells = lexicon.num_cells();
    double sum = 0.0;
    for (std::size_t x = 0; x < cells; ++x)
        for (std::size_t y = 0; y < cells; ++y)
            if (x != y)
                sum += measure(x, y);
    return sum / static_cast<double>(cells * (cells - 1));
}

} // namespace

double cell_entropy(const Lexicon& lexicon, std::size_t x)
{
    if (x >= lexicon.num_cells())
        throw std::out_of_range("cell index out of range");
    return PairwiseEntropies(lexicon).entropy(x);
}

double conditional_entropy(const Lexicon& lexicon, std::size_t x, std::size_t y)
{
    check_pair(lexicon, x, y);
    return PairwiseEntropies(lexicon).conditional(x, y);
}

double mean_conditional_entropy(const Lexicon& lexicon)
{
    PairwiseEntropies h(lexicon);
    return mean_over_ordered_pairs(lexicon, [&](auto x, auto y) { return h.conditional(x, y); });
}

double theils_u(const Lexicon& lexicon, std::size_t x, std::size_t y)
{
    check_pair(lexicon, x, y);
    return PairwiseEntropies(lexicon).theils_u(x, y);
}

double mean_theils_u(const Lexicon& lexicon)
{
    PairwiseEntropies h(lexicon);
    return mean_over_ordered_pairs(lexicon, [&](auto x, auto y) { return h.theils_u(x, y); });
}

std::size_t class_turnover(const std::set<ClassSignature>& s1, const std::set<ClassSignature>& s2)
{
    std::size_t common = 0;
    auto a = s1.begin();
    auto b = s2.begin();
    while (a != s1.end() && b != s2.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++common;
            ++a;
            ++b;
        }
    }
    return s1.size() + s2.size() - 2 * common;
}

std::pair<std::size_t, std::size_t> largest_two_classes(const Lexicon& lexicon)
{
    std::map<std::span<const ExponentId>, std::size_t,
             decltype([](std::span<const ExponentId> a, std::span<const ExponentId> b) {
                 return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
             })>
        sizes;
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
        ++sizes[lexicon.row(l)];
    std::size_t first = 0;
    std::size_t second = 0;
    for (const auto& [row, size] : sizes) {
        if (size > first) {
            second = first;
            first = size;
        } else if (size > second) {
            second = size;
        }
    }
    return {first, second};
}

double mean_exponents_per_cell(const Lexicon& lexicon)
{
    double total = 0.0;
    std::vector<std::uint8_t> seen;
    for (std::size_t c = 0; c < lexicon.num_cells(); ++c) {
        seen.assign(lexicon.inventory_sizes()[c], 0);
        std::size_t distinct = 0;
        for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l) {
            auto& flag = seen[lexicon.at(l, c).value];
            distinct += flag == 0;
            flag = 1;
        }
        total += static_cast<double>(distinct);
    }
    return total / static_cast<double>(lexicon.num_cells());
}

bool columns_mutually_determined(const Lexicon& lexicon)
{
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> image;
    for (std::size_t y = 0; y < lexicon.num_cells(); ++y) {
        for (std::size_t x = 0; x < lexicon.num_cells(); ++x) {
            if (x == y)
                continue;
            image.assign(lexicon.inventory_sizes()[y], unset);
            for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l) {
                auto& slot = image[lexicon.at(l, y).value];
                const auto value = lexicon.at(l, x).value;
                if (slot == unset)
                    slot = value;
                else if (slot != value)
                    return false;
            }
        }
    }
    return true;
}

MetricsFrame evaluate_metrics(const Lexicon& lexicon, std::size_t cycle, const Lexicon* prior)
{
    MetricsFrame frame;
    frame.cycle = cycle;
    PairwiseEntropies h(lexicon);
    frame.mean_cond_entropy =
        mean_over_ordered_pairs(lexicon, [&](auto x, auto y) { return h.conditional(x, y); });
    frame.mean_theils_u = mean_over_ordered_pairs(lexicon, [&](auto x, auto y) { return h.theils_u(x, y); });
    const auto classes = distinct_classes(lexicon);
    frame.class_count = classes.size();
    frame.mean_exponents_per_cell = mean_exponents_per_cell(lexicon);
    if (prior)
        frame.turnover = class_turnover(distinct_classes(*prior), classes);
    std::tie(frame.largest_class, frame.second_class) = largest_two_classes(lexicon);
    frame.zone_count = zone_partition(lexicon).size();
    return frame;
}

std::size_t turnover_gap(std::size_t total_cycles)
{
    return std::max<std::size_t>(1, total_cycles / 100);
}

} // namespace morphoevo
