#pragma once

#include "morphoevo/lexicon.hpp"
#include "morphoevo/rng.hpp"
#include "morphoevo/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace morphoevo {

/// Whether analogy groups lexemes into classes (pivot cells, evidence lexemes)
/// or cells into zones (pivot lexemes, evidence cells).
enum class Orientation { rhizomorphome, metamorphome };

std::string_view to_string(Orientation orientation);
/// Throws SchemaError on an unknown name.
Orientation orientation_from_string(std::string_view name);

/// Which voted exponents may win the focal cell.
enum class CandidateRule {
    /// Any exponent seen in the evidence, including one that only drew
    /// contrasting votes. At alpha = 0 those votes weigh nothing, so a step
    /// with no matching evidence picks uniformly among the observed exponents.
    observed,
    /// Only exponents whose votes carry weight. Same as observed for
    /// alpha > 0; at alpha = 0 a step without matching evidence keeps the
    /// incumbent.
    voted,
    /// Only exponents with at least one matching vote. Contrasting votes
    /// still lower their scores. With no matching evidence the incumbent stays.
    supported,
};

std::string_view to_string(CandidateRule rule);
/// Throws SchemaError on an unknown name.
CandidateRule candidate_rule_from_string(std::string_view name);

struct StepConfig {
    Orientation orientation = Orientation::rhizomorphome;
    /// Weight of a contrasting evidence token; 0 is associative-only.
    double alpha = 0.0;
    CandidateRule candidates = CandidateRule::observed;
    SamplePlan plan;
    /// Delete lexemes that become identical to the focal lexeme.
    bool tidy_up = false;
    /// Metamorphome only: single evidence lexeme, identity copies the pivot,
    /// contrast picks one of the focal lexeme's other indices at random.
    bool esher_mode = false;
    /// Apply Zipf skew by weighting uniformly sampled evidence instead of
    /// sampling evidence with Zipf probabilities.
    bool zipf_weighting = false;

    friend bool operator==(const StepConfig&, const StepConfig&) = default;
};

/// Throws ConfigError if `cfg` cannot drive a lexicon of this shape.
void validate(const StepConfig& cfg, std::size_t num_lexemes, std::span<const std::size_t> inventory_sizes);

struct ChangeRecord {
    std::size_t cycle = 0;
    std::size_t focal_lexeme = 0;
    std::size_t focal_cell = 0;
    ExponentId old_exponent;
    ExponentId new_exponent;
    bool changed = false;
    std::size_t lexemes_deleted = 0;

    friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

/// Scores accumulated by candidate exponents during one step.
///
/// Only exponents that received a vote are candidates; an exponent that was
/// never observed in the evidence does not compete with an implicit zero.
/// CandidateRule::voted ignores zero-weight votes and ::supported needs a
/// positive one.
class Tally {
public:
    void reset(std::size_t inventory_size, CandidateRule rule = CandidateRule::observed);
    void vote(ExponentId exponent, double weight);

    bool empty() const noexcept { return candidates_.empty(); }
    /// Candidates in first-vote order.
    std::span<const ExponentId> candidates() const noexcept { return candidates_; }
    double score(ExponentId exponent) const noexcept { return score_[exponent.value]; }

    /// Exponents whose score ties the maximum (within 1e-9).
    std::vector<ExponentId> leaders() const;
    /// Argmax with uniform random tie-break. Tally must not be empty.
    ExponentId winner(Rng& rng) const;

private:
    CandidateRule rule_ = CandidateRule::observed;
    std::vector<double> score_;
    std::vector<std::uint8_t> seen_;
    std::vector<ExponentId> touched_;
    std::vector<ExponentId> candidates_;
};

/// Adds the votes of `evidence` lexemes for one pivot cell. An evidence lexeme
/// matching the focal lexeme at the pivot gives +weight to its own focal-cell
/// exponent; a contrasting one gives -alpha*weight (nothing when alpha = 0).
/// `weights`, if non-empty, is indexed by lexeme and scales each vote.
void score_rhizo_evidence(const Lexicon& lexicon, std::size_t focal_lexeme, std::size_t focal_cell,
                          std::size_t pivot_cell, std::span<const std::size_t> evidence, double alpha,
                          Tally& tally, double pivot_weight = 1.0, std::span<const double> weights = {});

/// Dual of score_rhizo_evidence: for each evidence cell E the pivot lexeme
/// votes for the focal lexeme's index at E, +weight if the pivot holds the
/// same index at E and at the focal cell, -alpha*weight otherwise.
void score_meta_evidence(const Lexicon& lexicon, std::size_t focal_lexeme, std::size_t focal_cell,
                         std::size_t pivot_lexeme, std::span<const std::size_t> evidence_cells,
                         double alpha, Tally& tally, double pivot_weight = 1.0,
                         std::span<const double> weights = {});

/// Removes every other lexeme whose row equals the focal row; returns the
/// number removed. The focal lexeme keeps its row but may move to a lower index.
std::size_t tidy_up(Lexicon& lexicon, std::size_t focal_lexeme);

/// Outcome of one Esher fill: identity copies the focal lexeme's pivot index,
/// contrast draws uniformly among the distinct indices in its other cells.
ExponentId esher_fill(const Lexicon& lexicon, std::size_t focal_lexeme, std::size_t focal_cell,
                      std::size_t pivot_cell, std::size_t evidence_lexeme, Rng& rng);

/// Executes cell-filling steps for one run. Holds the frequency tables and
/// scratch buffers so the hot loop does not allocate.
class CellFiller {
public:
    /// Validates `cfg` against the lexicon's shape.
    CellFiller(StepConfig cfg, const Lexicon& lexicon);

    const StepConfig& config() const noexcept { return cfg_; }

    /// Dispatches on orientation and esher_mode.
    ChangeRecord step(Lexicon& lexicon, Rng& rng);

    ChangeRecord rhizo_step(Lexicon& lexicon, Rng& rng);
    ChangeRecord esher_step(Lexicon& lexicon, Rng& rng);
    ChangeRecord meta_step(Lexicon& lexicon, Rng& rng);

    /// Candidate scores from the most recent rhizo/meta step.
    const Tally& last_tally() const noexcept { return tally_; }
    /// Focal row as it stood after the most recent step's fill, before any
    /// tidying-up.
    std::span<const ExponentId> last_focal_row() const noexcept { return focal_row_; }

private:
    std::size_t pick_focal_lexeme(const Lexicon& lexicon, Rng& rng) const;
    std::size_t pick_focal_cell(Rng& rng) const;
    void draw_excluding(std::size_t n, std::size_t excluded, std::size_t count,
                        std::span<const double> weights, Rng& rng, std::vector<std::size_t>& out);
    static double vote_scale(std::span<const double> scale, std::size_t item);
    void apply(Lexicon& lexicon, ChangeRecord& record);

    StepConfig cfg_;
    std::size_t num_cells_;
    std::vector<double> lexeme_weights_;  // empty when uniform
    std::vector<double> cell_weights_;    // empty when uniform
    std::vector<double> lexeme_vote_scale_;  // zipf_weighting only
    std::vector<double> cell_vote_scale_;    // zipf_weighting only
    DiscreteDistribution lexeme_focus_;
    DiscreteDistribution cell_focus_;
    Tally tally_;
    std::vector<std::size_t> pivots_;
    std::vector<std::size_t> evidence_;
    std::vector<std::size_t> pool_;
    std::vector<double> weight_pool_;
    std::vector<double> scratch_;
    std::vector<ExponentId> focal_row_;
};

ChangeRecord rhizo_step(Lexicon& lexicon, const StepConfig& cfg, Rng& rng);
ChangeRecord esher_step(Lexicon& lexicon, Rng& rng);
ChangeRecord meta_step(Lexicon& lexicon, const StepConfig& cfg, Rng& rng);

} // namespace morphoevo
