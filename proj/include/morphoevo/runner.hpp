#pragma once

#include "morphoevo/cellfill.hpp"
#include "morphoevo/lexicon.hpp"
#include "morphoevo/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morphoevo {

enum class HaltKind {
    /// Run exactly total_cycles.
    fixed_cycles,
    /// Stop after n consecutive cycles without a change (or at total_cycles).
    unchanged_streak,
    /// Stop at a fixed point of the associative step with full evidence (or
    /// at total_cycles): every cell is a function of every other cell and,
    /// under CandidateRule::observed, no class has a single member unless it
    /// is the only class. Checked at metric cycles.
    absorbed,
};

std::string_view to_string(HaltKind kind);
/// Throws SchemaError on an unknown name.
HaltKind halt_kind_from_string(std::string_view name);

struct Halting {
    HaltKind kind = HaltKind::fixed_cycles;
    std::size_t n = 25;

    friend bool operator==(const Halting&, const Halting&) = default;
};

struct LexiconSpec {
    std::size_t num_lexemes = 100;
    std::vector<std::size_t> inventory_sizes = std::vector<std::size_t>(8, 5);
    /// Set: every run starts from the lexicon generated by this seed.
    /// Unset: each run draws its own initial lexicon from its run seed.
    std::optional<std::uint64_t> init_seed;

    std::size_t num_cells() const noexcept { return inventory_sizes.size(); }
    friend bool operator==(const LexiconSpec&, const LexiconSpec&) = default;
};

struct SimulationConfig {
    /// Name of the preset this config was derived from, if any.
    std::string preset;
    LexiconSpec lexicon;
    StepConfig step;
    std::size_t total_cycles = 10000;
    Halting halting;
    std::size_t metric_interval = 20;
    std::size_t snapshot_count = 8;
    std::size_t runs = 100;
    std::uint64_t master_seed = 20240601;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// max(1, total_cycles / 500).
std::size_t default_metric_interval(std::size_t total_cycles);

/// Throws ConfigError on any invalid or infeasible setting.
void validate(const SimulationConfig& cfg);

struct Snapshot {
    std::size_t cycle = 0;
    Lexicon lexicon;
};

struct RunRecord {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::vector<MetricsFrame> frames;
    std::vector<Snapshot> snapshots;
    std::size_t final_cycle = 0;
    std::size_t changed_cycles = 0;
    std::size_t unchanged_cycles = 0;
    /// First cycle at which one class held at least half of the initial
    /// lexemes (cycle 0 counts).
    std::optional<std::size_t> first_majority_cycle;

    const MetricsFrame& final_frame() const { return frames.back(); }
    /// Last frame recorded at or before `cycle`; nullptr if none.
    const MetricsFrame* frame_at(std::size_t cycle) const;
};

struct RunOptions {
    /// Snapshots under early halting need a second pass over the run.
    bool capture_snapshots = true;
};

/// One simulation; a pure function of (cfg, run_id).
RunRecord run_simulation(const SimulationConfig& cfg, std::size_t run_id, const RunOptions& options = {});

/// Cycles at which snapshots are taken for a run ending at `final_cycle`.
std::vector<std::size_t> snapshot_cycles(std::size_t final_cycle, std::size_t snapshot_count);

inline constexpr std::string_view kMetricNames[] = {
    "mean_cond_entropy", "mean_theils_u", "classes", "mean_exponents_per_cell",
    "turnover", "largest_class", "second_class", "zones",
};

/// The stopping test of HaltKind::absorbed.
bool absorbed(const Lexicon& lexicon, CandidateRule rule);

/// Value of a named metric; nullopt for an absent turnover.
std::optional<double> metric_value(const MetricsFrame& frame, std::string_view metric);

struct AggregateRow {
    std::size_t cycle = 0;
    std::string metric;
    double mean = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
};

/// Percentile with linear interpolation between order statistics
/// (position q*(n-1)). `values` need not be sorted.
double percentile(std::vector<double> values, double q);

/// Per-cycle mean and 5th/95th percentiles across runs. Runs that halted
/// before a cycle contribute their last recorded frame.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs);

struct BatchOptions {
    std::size_t threads = 1;
    RunOptions run;
    /// Called once per finished run, from the worker thread.
    std::function<void(const RunRecord&)> on_run_done;
};

struct BatchResult {
    SimulationConfig config;
    /// Indexed by run_id.
    std::vector<RunRecord> runs;
    std::vector<AggregateRow> aggregate;
};

BatchResult run_batch(const SimulationConfig& cfg, const BatchOptions& options = {});

/// Names accepted by preset_experiment, in documentation order.
const std::vector<std::string>& preset_names();

/// Throws ConfigError for an unknown name.
SimulationConfig preset_experiment(std::string_view name);

} // namespace morphoevo
