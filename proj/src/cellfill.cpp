#include "morphoevo/cellfill.hpp"

#include "morphoevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace morphoevo {

std::string_view to_string(Orientation orientation)
{
    return orientation == Orientation::rhizomorphome ? "rhizomorphome" : "metamorphome";
}

Orientation orientation_from_string(std::string_view name)
{
    if (name == "rhizomorphome")
        return Orientation::rhizomorphome;
    if (name == "metamorphome")
        return Orientation::metamorphome;
    throw SchemaError("unknown orientation '" + std::string(name) + "'");
}

std::string_view to_string(CandidateRule rule)
{
    switch (rule) {
    case CandidateRule::observed: return "observed";
    case CandidateRule::voted: return "voted";
    case CandidateRule::supported: return "supported";
    }
    return "observed";
}

CandidateRule candidate_rule_from_string(std::string_view name)
{
    if (name == "observed")
        return CandidateRule::observed;
    if (name == "voted")
        return CandidateRule::voted;
    if (name == "supported")
        return CandidateRule::supported;
    throw SchemaError("unknown candidate rule '" + std::string(name) + "'");
}

void validate(const StepConfig& cfg, std::size_t num_lexemes, std::span<const std::size_t> inventory_sizes)
{
    const auto num_cells = inventory_sizes.size();
    if (num_lexemes == 0)
        throw ConfigError("lexicon has no lexemes");
    if (num_cells < 2)
        throw ConfigError("lexicon needs at least 2 cells");
    if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha))
        throw ConfigError("alpha must be a finite non-negative number");
    const auto& plan = cfg.plan;
    if (!(plan.evidence_fraction > 0.0) || plan.evidence_fraction > 1.0)
        throw ConfigError("evidence_fraction must lie in (0, 1]");
    if (plan.num_pivots == 0)
        throw ConfigError("num_pivots must be at least 1");
    for (const auto* zipf : {&plan.lexeme_zipf, &plan.cell_zipf})
        if (zipf->enabled && !(zipf->s > 0.0))
            throw ConfigError("Zipf exponent s must be positive");
    if (cfg.orientation == Orientation::rhizomorphome) {
        if (cfg.esher_mode)
            throw ConfigError("esher_mode requires the metamorphome orientation");
        if (plan.num_pivots > num_cells - 1)
            throw ConfigError("num_pivots=" + std::to_string(plan.num_pivots) + " needs at least " +
                              std::to_string(plan.num_pivots + 1) + " cells, lexicon has " +
                              std::to_string(num_cells));
        if (cfg.tidy_up && plan.lexeme_zipf.enabled)
            throw ConfigError("tidy_up deletes lexemes and cannot be combined with lexeme Zipf weights");
        return;
    }
    if (cfg.tidy_up)
        throw ConfigError("tidy_up is only valid with the rhizomorphome orientation");
    if (num_lexemes < 2)
        throw ConfigError("metamorphome steps need at least 2 lexemes");
    if (!std::all_of(inventory_sizes.begin(), inventory_sizes.end(),
                     [&](std::size_t s) { return s == inventory_sizes[0]; }))
        throw ConfigError("metamorphome lexicons share one index inventory across cells");
    if (!cfg.esher_mode && plan.num_pivots > num_lexemes - 1)
        throw ConfigError("num_pivots=" + std::to_string(plan.num_pivots) + " exceeds the " +
                          std::to_string(num_lexemes - 1) + " available pivot lexemes");
}

void Tally::reset(std::size_t inventory_size, CandidateRule rule)
{
    rule_ = rule;
    for (auto e : touched_) {
        score_[e.value] = 0.0;
        seen_[e.value] = 0;
    }
    touched_.clear();
    candidates_.clear();
    if (score_.size() < inventory_size) {
        score_.resize(inventory_size, 0.0);
        seen_.resize(inventory_size, 0);
    }
}

void Tally::vote(ExponentId exponent, double weight)
{
    if (exponent.value >= score_.size()) {
        score_.resize(exponent.value + std::size_t{1}, 0.0);
        seen_.resize(exponent.value + std::size_t{1}, 0);
    }
    // seen_: bit 0 touched, bit 1 candidate
    auto& flags = seen_[exponent.value];
    if (!(flags & 1u)) {
        flags |= 1u;
        touched_.push_back(exponent);
    }
    const bool admit = rule_ == CandidateRule::observed || (rule_ == CandidateRule::voted && weight != 0.0) ||
                       weight > 0.0;
    if (!(flags & 2u) && admit) {
        flags |= 2u;
        candidates_.push_back(exponent);
    }
    score_[exponent.value] += weight;
}

std::vector<ExponentId> Tally::leaders() const
{
    std::vector<ExponentId> best;
    if (candidates_.empty())
        return best;
    double top = score_[candidates_.front().value];
    for (auto e : candidates_)
        top = std::max(top, score_[e.value]);
    for (auto e : candidates_)
        if (score_[e.value] >= top - 1e-9)
            best.push_back(e);
    std::sort(best.begin(), best.end());
    return best;
}

ExponentId Tally::winner(Rng& rng) const
{
    auto best = leaders();
    if (best.size() == 1)
        return best.front();
    return best[rng.index(best.size())];
}

void score_rhizo_evidence(const Lexicon& lexicon, std::size_t focal_lexeme, std::size_t focal_cell,
                          std::size_t pivot_cell, std::span<const std::size_t> evidence, double alpha,
                          Tally& tally, double pivot_weight, std::span<const double> weights)
{
    const auto pivot_exponent = lexicon.at(focal_lexeme, pivot_cell);
    const auto scale = [&](std::size_t l) {
        return weights.empty() ? pivot_weight : pivot_weight * weights[l];
    };
    for (auto l : evidence) {
        const auto token = lexicon.at(l, focal_cell);
        if (lexicon.at(l, pivot_cell) == pivot_exponent)
            tally.vote(token, scale(l));
        else
            tally.vote(token, -alpha * scale(l));
    }
}

void score_meta_evidence(const Lexicon& lexicon, std::size_t focal_lexeme, std::size_t focal_cell,
                         std::size_t pivot_lexeme, std::span<const std::size_t> evidence_cells,
                         double alpha, Tally& tally, double pivot_weight, std::span<const double> weights)
{
    const auto pivot_at_focus = lexicon.at(pivot_lexeme, focal_cell);
    const auto scale = [&](std::size_t c) {
        return weights.empty() ? pivot_weight : pivot_weight * weights[c];
    };
    for (auto c : evidence_cells) {
        const auto token = lexicon.at(focal_lexeme, c);
        if (lexicon.at(pivot_lexeme, c) == pivot_at_focus)
            tally.vote(token, scale(c));
        else
            tally.vote(token, -alpha * scale(c));
    }
}

std::size_t tidy_up(Lexicon& lexicon, std::size_t focal_lexeme)
{
    std::vector<std::size_t> duplicates;
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
        if (l != focal_lexeme && lexicon.rows_equal(l, focal_lexeme))
            duplicates.push_back(l);
    lexicon.erase_lexemes(duplicates);
    return duplicates.size();
}

ExponentId esher_fill(const Lexicon& lexicon, std::size_t focal_lexeme, std::size_t focal_cell,
                      std::size_t pivot_cell, std::size_t evidence_lexeme, Rng& rng)
{
    if (lexicon.at(evidence_lexeme, pivot_cell) == lexicon.at(evidence_lexeme, focal_cell))
        return lexicon.at(focal_lexeme, pivot_cell);
    std::vector<ExponentId> present;
    for (std::size_t c = 0; c < lexicon.num_cells(); ++c)
        if (c != focal_cell)
            present.push_back(lexicon.at(focal_lexeme, c));
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    return present[rng.index(present.size())];
}

CellFiller::CellFiller(StepConfig cfg, const Lexicon& lexicon)
    : cfg_(std::move(cfg)), num_cells_(lexicon.num_cells())
{
    validate(cfg_, lexicon.num_lexemes(), lexicon.inventory_sizes());
    if (cfg_.plan.lexeme_zipf.enabled) {
        lexeme_weights_ = item_weights(cfg_.plan.lexeme_zipf, lexicon.num_lexemes());
        lexeme_focus_ = DiscreteDistribution(focus_probabilities(lexeme_weights_));
    }
    if (cfg_.plan.cell_zipf.enabled) {
        cell_weights_ = item_weights(cfg_.plan.cell_zipf, num_cells_);
        cell_focus_ = DiscreteDistribution(focus_probabilities(cell_weights_));
    }
    if (cfg_.zipf_weighting) {
        // Mean vote weight stays 1 so alpha keeps its meaning.
        for (auto w : lexeme_weights_)
            lexeme_vote_scale_.push_back(w * static_cast<double>(lexeme_weights_.size()));
        for (auto w : cell_weights_)
            cell_vote_scale_.push_back(w * static_cast<double>(cell_weights_.size()));
    }
}

ChangeRecord CellFiller::step(Lexicon& lexicon, Rng& rng)
{
    if (cfg_.orientation == Orientation::rhizomorphome)
        return rhizo_step(lexicon, rng);
    return cfg_.esher_mode ? esher_step(lexicon, rng) : meta_step(lexicon, rng);
}

std::size_t CellFiller::pick_focal_lexeme(const Lexicon& lexicon, Rng& rng) const
{
    return lexeme_focus_.empty() ? rng.index(lexicon.num_lexemes()) : lexeme_focus_(rng);
}

std::size_t CellFiller::pick_focal_cell(Rng& rng) const
{
    return cell_focus_.empty() ? rng.index(num_cells_) : cell_focus_(rng);
}

double CellFiller::vote_scale(std::span<const double> scale, std::size_t item)
{
    return scale.empty() ? 1.0 : scale[item];
}

void CellFiller::draw_excluding(std::size_t n, std::size_t excluded, std::size_t count,
                                std::span<const double> weights, Rng& rng, std::vector<std::size_t>& out)
{
    pool_.clear();
    for (std::size_t i = 0; i < n; ++i)
        if (i != excluded)
            pool_.push_back(i);
    if (count >= pool_.size()) {
        out = pool_;
        return;
    }
    if (weights.empty() || cfg_.zipf_weighting) {
        // Partial Fisher-Yates: the first `count` slots become the sample.
        for (std::size_t i = 0; i < count; ++i)
            std::swap(pool_[i], pool_[i + rng.index(pool_.size() - i)]);
        out.assign(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(count));
        return;
    }
    weight_pool_.clear();
    for (auto i : pool_)
        weight_pool_.push_back(weights[i]);
    sample_without_replacement(weight_pool_, count, rng, out, scratch_);
    for (auto& i : out)
        i = pool_[i];
}

void CellFiller::apply(Lexicon& lexicon, ChangeRecord& record)
{
    record.changed = record.new_exponent != record.old_exponent;
    if (record.changed)
        lexicon.set(record.focal_lexeme, record.focal_cell, record.new_exponent);
    const auto row = lexicon.row(record.focal_lexeme);
    focal_row_.assign(row.begin(), row.end());
}

ChangeRecord CellFiller::rhizo_step(Lexicon& lexicon, Rng& rng)
{
    ChangeRecord record;
    const auto num_lexemes = lexicon.num_lexemes();
    const auto focal_lexeme = pick_focal_lexeme(lexicon, rng);
    const auto focal_cell = pick_focal_cell(rng);
    record.focal_lexeme = focal_lexeme;
    record.focal_cell = focal_cell;
    record.old_exponent = lexicon.at(focal_lexeme, focal_cell);

    draw_excluding(num_cells_, focal_cell, cfg_.plan.num_pivots, cell_weights_, rng, pivots_);
    const auto evidence_count = sample_count(cfg_.plan.evidence_fraction, num_lexemes - 1);

    tally_.reset(lexicon.inventory_sizes()[focal_cell], cfg_.candidates);
    for (std::size_t p = 0; p < pivots_.size(); ++p) {
        if (p == 0 || cfg_.plan.per_pivot_resample)
            draw_excluding(num_lexemes, focal_lexeme, evidence_count, lexeme_weights_, rng, evidence_);
        score_rhizo_evidence(lexicon, focal_lexeme, focal_cell, pivots_[p], evidence_, cfg_.alpha, tally_,
                             vote_scale(cell_vote_scale_, pivots_[p]), lexeme_vote_scale_);
    }

    record.new_exponent = tally_.empty() ? record.old_exponent : tally_.winner(rng);
    apply(lexicon, record);
    if (cfg_.tidy_up)
        record.lexemes_deleted = tidy_up(lexicon, focal_lexeme);
    return record;
}

ChangeRecord CellFiller::esher_step(Lexicon& lexicon, Rng& rng)
{
    ChangeRecord record;
    const auto focal_lexeme = pick_focal_lexeme(lexicon, rng);
    const auto focal_cell = pick_focal_cell(rng);
    record.focal_lexeme = focal_lexeme;
    record.focal_cell = focal_cell;
    record.old_exponent = lexicon.at(focal_lexeme, focal_cell);

    draw_excluding(num_cells_, focal_cell, 1, cell_weights_, rng, pivots_);
    draw_excluding(lexicon.num_lexemes(), focal_lexeme, 1, lexeme_weights_, rng, evidence_);
    record.new_exponent = esher_fill(lexicon, focal_lexeme, focal_cell, pivots_[0], evidence_[0], rng);
    apply(lexicon, record);
    return record;
}

ChangeRecord CellFiller::meta_step(Lexicon& lexicon, Rng& rng)
{
    ChangeRecord record;
    const auto focal_lexeme = pick_focal_lexeme(lexicon, rng);
    const auto focal_cell = pick_focal_cell(rng);
    record.focal_lexeme = focal_lexeme;
    record.focal_cell = focal_cell;
    record.old_exponent = lexicon.at(focal_lexeme, focal_cell);

    draw_excluding(lexicon.num_lexemes(), focal_lexeme, cfg_.plan.num_pivots, lexeme_weights_, rng,
                   pivots_);
    const auto evidence_count = sample_count(cfg_.plan.evidence_fraction, num_cells_ - 1);

    tally_.reset(lexicon.inventory_sizes()[focal_cell], cfg_.candidates);
    for (std::size_t p = 0; p < pivots_.size(); ++p) {
        if (p == 0 || cfg_.plan.per_pivot_resample)
            draw_excluding(num_cells_, focal_cell, evidence_count, cell_weights_, rng, evidence_);
        score_meta_evidence(lexicon, focal_lexeme, focal_cell, pivots_[p], evidence_, cfg_.alpha, tally_,
                            vote_scale(lexeme_vote_scale_, pivots_[p]), cell_vote_scale_);
    }

    record.new_exponent = tally_.empty() ? record.old_exponent : tally_.winner(rng);
    apply(lexicon, record);
    return record;
}

ChangeRecord rhizo_step(Lexicon& lexicon, const StepConfig& cfg, Rng& rng)
{
    if (cfg.orientation != Orientation::rhizomorphome)
        throw ConfigError("rhizo_step requires the rhizomorphome orientation");
    return CellFiller(cfg, lexicon).rhizo_step(lexicon, rng);
}

ChangeRecord esher_step(Lexicon& lexicon, Rng& rng)
{
    StepConfig cfg;
    cfg.orientation = Orientation::metamorphome;
    cfg.esher_mode = true;
    return CellFiller(cfg, lexicon).esher_step(lexicon, rng);
}

ChangeRecord meta_step(Lexicon& lexicon, const StepConfig& cfg, Rng& rng)
{
    if (cfg.orientation != Orientation::metamorphome || cfg.esher_mode)
        throw ConfigError("meta_step requires the metamorphome orientation without esher_mode");
    return CellFiller(cfg, lexicon).meta_step(lexicon, rng);
}

} // namespace morphoevo
