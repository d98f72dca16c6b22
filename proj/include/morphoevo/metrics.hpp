#pragma once

#include "morphoevo/lexicon.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <utility>

namespace morphoevo {

/// All structural measures of one lexicon state. Entropies are in bits and
/// use lexeme type frequencies (each current lexeme weighs 1).
struct MetricsFrame {
    std::size_t cycle = 0;
    double mean_cond_entropy = 0.0;
    double mean_theils_u = 0.0;
    std::size_t class_count = 0;
    double mean_exponents_per_cell = 0.0;
    /// Absent until a state one turnover gap earlier exists.
    std::optional<std::size_t> turnover;
    std::size_t largest_class = 0;
    std::size_t second_class = 0;
    std::size_t zone_count = 0;

    friend bool operator==(const MetricsFrame&, const MetricsFrame&) = default;
};

/// H(X) over the exponents of one column.
double cell_entropy(const Lexicon& lexicon, std::size_t x);

/// H(X|Y) from the joint frequencies of columns X and Y. Throws
/// std::invalid_argument when X == Y.
double conditional_entropy(const Lexicon& lexicon, std::size_t x, std::size_t y);

/// Mean of H(X|Y) over ordered pairs X != Y.
double mean_conditional_entropy(const Lexicon& lexicon);

/// (H(X) - H(X|Y)) / H(X), or 0 when H(X) = 0.
double theils_u(const Lexicon& lexicon, std::size_t x, std::size_t y);

/// Mean of U(X|Y) over ordered pairs X != Y.
double mean_theils_u(const Lexicon& lexicon);

/// |S1 u S2| - |S1 n S2|.
std::size_t class_turnover(const std::set<ClassSignature>& s1, const std::set<ClassSignature>& s2);

/// Sizes of the two most populous classes; second is 0 with a single class.
std::pair<std::size_t, std::size_t> largest_two_classes(const Lexicon& lexicon);

/// Mean over cells of the number of distinct exponents observed.
double mean_exponents_per_cell(const Lexicon& lexicon);

/// True when every cell's exponent is a function of every other cell's
/// exponent (all pairwise H(X|Y) = 0). Exact integer test.
bool columns_mutually_determined(const Lexicon& lexicon);

/// Evaluates the full frame; `prior` is the state one turnover gap earlier.
MetricsFrame evaluate_metrics(const Lexicon& lexicon, std::size_t cycle, const Lexicon* prior = nullptr);

/// Cycles between the two class sets compared by turnover: 1% of the run.
std::size_t turnover_gap(std::size_t total_cycles);

} // namespace morphoevo
