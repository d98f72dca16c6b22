#include "morphoevo/runner.hpp"

#include "morphoevo/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace morphoevo {

std::string_view to_string(HaltKind kind)
{
    switch (kind) {
    case HaltKind::fixed_cycles:
        return "fixed_cycles";
    case HaltKind::unchanged_streak:
        return "unchanged_streak";
    case HaltKind::absorbed:
        return "absorbed";
    }
    return "fixed_cycles";
}

HaltKind halt_kind_from_string(std::string_view name)
{
    for (auto kind : {HaltKind::fixed_cycles, HaltKind::unchanged_streak, HaltKind::absorbed})
        if (to_string(kind) == name)
            return kind;
    throw SchemaError("unknown halting kind '" + std::string(name) + "'");
}

std::size_t default_metric_interval(std::size_t total_cycles)
{
    return std::max<std::size_t>(1, total_cycles / 500);
}

void validate(const SimulationConfig& cfg)
{
    if (cfg.lexicon.num_lexemes == 0)
        throw ConfigError("lexicon.num_lexemes must be at least 1");
    if (cfg.lexicon.num_cells() < 2)
        throw ConfigError("lexicon needs at least 2 cells");
    for (auto size : cfg.lexicon.inventory_sizes)
        if (size == 0 || size > 65536)
            throw ConfigError("inventory sizes must lie in [1, 65536]");
    validate(cfg.step, cfg.lexicon.num_lexemes, cfg.lexicon.inventory_sizes);
    if (cfg.total_cycles == 0)
        throw ConfigError("total_cycles must be at least 1");
    if (cfg.metric_interval == 0)
        throw ConfigError("metric_interval must be at least 1");
    if (cfg.snapshot_count < 2)
        throw ConfigError("snapshot_count must be at least 2");
    if (cfg.runs == 0)
        throw ConfigError("runs must be at least 1");
    if (cfg.halting.kind == HaltKind::unchanged_streak && cfg.halting.n == 0)
        throw ConfigError("unchanged_streak needs n >= 1");
}

const MetricsFrame* RunRecord::frame_at(std::size_t cycle) const
{
    auto it = std::upper_bound(frames.begin(), frames.end(), cycle,
                               [](std::size_t c, const MetricsFrame& f) { return c < f.cycle; });
    if (it == frames.begin())
        return nullptr;
    return &*std::prev(it);
}

std::vector<std::size_t> snapshot_cycles(std::size_t final_cycle, std::size_t snapshot_count)
{
    std::vector<std::size_t> cycles;
    for (std::size_t t = 0; t < snapshot_count; ++t)
        cycles.push_back(t * final_cycle / (snapshot_count - 1));
    cycles.erase(std::unique(cycles.begin(), cycles.end()), cycles.end());
    return cycles;
}

namespace {

/// Recent changes, kept so the class set of the state `gap` cycles ago can
/// be rebuilt by undoing them.
class TurnoverWindow {
public:
    explicit TurnoverWindow(std::size_t gap) : gap_(gap) {}

    void record(std::size_t cycle, const ChangeRecord& change, std::span<const ExponentId> row_after)
    {
        if (!change.changed && change.lexemes_deleted == 0)
            return;
        entries_.push_back({cycle, ClassSignature(row_after.begin(), row_after.end()), change.focal_cell,
                            change.old_exponent, change.lexemes_deleted, change.changed});
    }

    /// Classes present at cycle `now - gap`. Requires now >= gap.
    std::set<ClassSignature> prior_classes(const Lexicon& lexicon, std::size_t now)
    {
        const std::size_t then = now - gap_;
        while (!entries_.empty() && entries_.front().cycle <= then)
            entries_.pop_front();
        std::map<ClassSignature, std::ptrdiff_t> counts;
        for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
            ++counts[lexicon.signature(l)];
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
            counts[it->row_after] += static_cast<std::ptrdiff_t>(it->deleted);
            if (it->changed) {
                --counts[it->row_after];
                auto before = it->row_after;
                before[it->focal_cell] = it->old_exponent;
                ++counts[before];
            }
        }
        std::set<ClassSignature> classes;
        for (auto& [row, n] : counts)
            if (n > 0)
                classes.insert(row);
        return classes;
    }

private:
    struct Entry {
        std::size_t cycle;
        ClassSignature row_after;
        std::size_t focal_cell;
        ExponentId old_exponent;
        std::size_t deleted;
        bool changed;
    };

    std::size_t gap_;
    std::deque<Entry> entries_;
};

Lexicon initial_lexicon(const SimulationConfig& cfg, Rng& run_rng)
{
    const auto& spec = cfg.lexicon;
    if (spec.init_seed) {
        Rng shared(*spec.init_seed);
        return init_random_lexicon(spec.num_lexemes, spec.num_cells(), spec.inventory_sizes, shared);
    }
    return init_random_lexicon(spec.num_lexemes, spec.num_cells(), spec.inventory_sizes, run_rng);
}

std::set<ClassSignature> patterns_of(const std::set<ClassSignature>& rows)
{
    std::set<ClassSignature> patterns;
    for (const auto& row : rows)
        patterns.insert(index_pattern(row));
    return patterns;
}

std::size_t count_rows_equal(const Lexicon& lexicon, std::span<const ExponentId> row)
{
    std::size_t n = 0;
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l) {
        const auto other = lexicon.row(l);
        n += std::equal(other.begin(), other.end(), row.begin());
    }
    return n;
}

void capture_snapshots(const SimulationConfig& cfg, RunRecord& record)
{
    const auto wanted = snapshot_cycles(record.final_cycle, cfg.snapshot_count);
    Rng rng(record.seed);
    Lexicon lexicon = initial_lexicon(cfg, rng);
    CellFiller filler(cfg.step, lexicon);
    std::size_t next = 0;
    for (std::size_t cycle = 0; next < wanted.size(); ++cycle) {
        if (cycle > 0)
            filler.step(lexicon, rng);
        if (wanted[next] == cycle) {
            record.snapshots.push_back({cycle, lexicon});
            ++next;
        }
    }
}

} // namespace

RunRecord run_simulation(const SimulationConfig& cfg, std::size_t run_id, const RunOptions& options)
{
    validate(cfg);
    RunRecord record;
    record.run_id = run_id;
    record.seed = derive_seed(cfg.master_seed, run_id);

    Rng rng(record.seed);
    Lexicon lexicon = initial_lexicon(cfg, rng);
    CellFiller filler(cfg.step, lexicon);

    const std::size_t gap = turnover_gap(cfg.total_cycles);
    TurnoverWindow window(gap);
    const std::size_t majority = (lexicon.num_lexemes() + 1) / 2;
    const bool fixed = cfg.halting.kind == HaltKind::fixed_cycles;
    const auto planned_snapshots =
        fixed && options.capture_snapshots ? snapshot_cycles(cfg.total_cycles, cfg.snapshot_count)
                                           : std::vector<std::size_t>{};
    std::size_t next_snapshot = 0;

    // Allomorph indices are local to each lexeme, so metamorphome runs are
    // measured on index patterns rather than raw indices.
    const bool by_pattern = cfg.step.orientation == Orientation::metamorphome;
    auto record_frame = [&](std::size_t cycle) {
        auto frame = by_pattern ? evaluate_metrics(index_patterns(lexicon), cycle) : evaluate_metrics(lexicon, cycle);
        if (cycle >= gap) {
            auto before = window.prior_classes(lexicon, cycle);
            auto now = distinct_classes(lexicon);
            if (by_pattern) {
                before = patterns_of(before);
                now = patterns_of(now);
            }
            frame.turnover = class_turnover(before, now);
        }
        record.frames.push_back(std::move(frame));
    };
    auto maybe_snapshot = [&](std::size_t cycle) {
        if (next_snapshot < planned_snapshots.size() && planned_snapshots[next_snapshot] == cycle) {
            record.snapshots.push_back({cycle, lexicon});
            ++next_snapshot;
        }
    };

    if (largest_two_classes(lexicon).first >= majority)
        record.first_majority_cycle = 0;
    record_frame(0);
    maybe_snapshot(0);

    bool halted = cfg.halting.kind == HaltKind::absorbed && absorbed(lexicon, cfg.step.candidates);
    std::size_t streak = 0;
    std::size_t cycle = 0;
    while (!halted && cycle < cfg.total_cycles) {
        ++cycle;
        const auto change = filler.step(lexicon, rng);
        if (change.changed) {
            ++record.changed_cycles;
            streak = 0;
            if (!record.first_majority_cycle && count_rows_equal(lexicon, filler.last_focal_row()) >= majority)
                record.first_majority_cycle = cycle;
        } else {
            ++record.unchanged_cycles;
            ++streak;
        }
        window.record(cycle, change, filler.last_focal_row());

        const bool metric_cycle = cycle % cfg.metric_interval == 0;
        if (cfg.halting.kind == HaltKind::unchanged_streak && streak >= cfg.halting.n)
            halted = true;
        if (cfg.halting.kind == HaltKind::absorbed && metric_cycle && absorbed(lexicon, cfg.step.candidates))
            halted = true;
        if (metric_cycle || halted || cycle == cfg.total_cycles)
            record_frame(cycle);
        maybe_snapshot(cycle);
    }
    record.final_cycle = cycle;

    if (options.capture_snapshots && !fixed)
        capture_snapshots(cfg, record);
    return record;
}

bool absorbed(const Lexicon& lexicon, CandidateRule rule)
{
    if (!columns_mutually_determined(lexicon))
        return false;
    if (rule != CandidateRule::observed)
        return true;
    // A lone member finds no match at any pivot and copies a random exponent.
    std::map<ClassSignature, std::size_t> sizes;
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
        ++sizes[lexicon.signature(l)];
    return sizes.size() <= 1 ||
           std::all_of(sizes.begin(), sizes.end(), [](const auto& entry) { return entry.second > 1; });
}

std::optional<double> metric_value(const MetricsFrame& frame, std::string_view metric)
{
    if (metric == "mean_cond_entropy")
        return frame.mean_cond_entropy;
    if (metric == "mean_theils_u")
        return frame.mean_theils_u;
    if (metric == "classes")
        return static_cast<double>(frame.class_count);
    if (metric == "mean_exponents_per_cell")
        return frame.mean_exponents_per_cell;
    if (metric == "turnover") {
        if (!frame.turnover)
            return std::nullopt;
        return static_cast<double>(*frame.turnover);
    }
    if (metric == "largest_class")
        return static_cast<double>(frame.largest_class);
    if (metric == "second_class")
        return static_cast<double>(frame.second_class);
    if (metric == "zones")
        return static_cast<double>(frame.zone_count);
    throw std::invalid_argument("unknown metric '" + std::string(metric) + "'");
}

double percentile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("percentile of no values");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs)
{
    std::vector<std::size_t> cycles;
    for (const auto& run : runs)
        for (const auto& frame : run.frames)
            cycles.push_back(frame.cycle);
    std::sort(cycles.begin(), cycles.end());
    cycles.erase(std::unique(cycles.begin(), cycles.end()), cycles.end());

    std::vector<AggregateRow> rows;
    std::vector<double> values;
    for (auto cycle : cycles) {
        for (auto metric : kMetricNames) {
            values.clear();
            for (const auto& run : runs)
                if (const auto* frame = run.frame_at(cycle))
                    if (auto v = metric_value(*frame, metric))
                        values.push_back(*v);
            if (values.empty())
                continue;
            AggregateRow row;
            row.cycle = cycle;
            row.metric = std::string(metric);
            row.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
            row.p5 = percentile(values, 0.05);
            row.p95 = percentile(values, 0.95);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

BatchResult run_batch(const SimulationConfig& cfg, const BatchOptions& options)
{
    validate(cfg);
    BatchResult result;
    result.config = cfg;
    result.runs.resize(cfg.runs);

    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, cfg.runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const auto id = next.fetch_add(1);
            if (id >= cfg.runs)
                return;
            try {
                result.runs[id] = run_simulation(cfg, id, options.run);
                if (options.on_run_done)
                    options.on_run_done(result.runs[id]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = cfg.runs;
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    result.aggregate = aggregate(result.runs);
    return result;
}

namespace {

SimulationConfig base_preset(std::string name, std::size_t total_cycles, std::size_t runs)
{
    SimulationConfig cfg;
    cfg.preset = std::move(name);
    cfg.total_cycles = total_cycles;
    cfg.metric_interval = default_metric_interval(total_cycles);
    cfg.runs = runs;
    return cfg;
}

SimulationConfig rhizo_preset(std::string name, std::size_t total_cycles, std::size_t runs, double fraction,
                              std::size_t pivots, double alpha = 0.0)
{
    auto cfg = base_preset(std::move(name), total_cycles, runs);
    cfg.step.plan.evidence_fraction = fraction;
    cfg.step.plan.num_pivots = pivots;
    cfg.step.alpha = alpha;
    return cfg;
}

SimulationConfig meta_preset(std::string name, std::size_t total_cycles, double alpha)
{
    auto cfg = base_preset(std::move(name), total_cycles, 100);
    cfg.step.orientation = Orientation::metamorphome;
    cfg.step.alpha = alpha;
    cfg.step.plan.num_pivots = 10;
    cfg.step.plan.evidence_fraction = 6.0 / 7.0;
    return cfg;
}

SimulationConfig edge_preset(std::string name, std::size_t inventory)
{
    auto cfg = rhizo_preset(std::move(name), 1'000'000, 500, 1.0, 1);
    cfg.lexicon.inventory_sizes.assign(8, inventory);
    cfg.halting.kind = HaltKind::absorbed;
    cfg.metric_interval = 500;
    return cfg;
}

std::map<std::string, SimulationConfig, std::less<>> build_presets()
{
    std::map<std::string, SimulationConfig, std::less<>> presets;
    auto add = [&](SimulationConfig cfg) { presets.emplace(cfg.preset, std::move(cfg)); };

    auto am_tidy = rhizo_preset("am_tidy", 2500, 100, 1.0, 1);
    am_tidy.step.tidy_up = true;
    add(am_tidy);
    add(rhizo_preset("am_no_tidy", 10000, 100, 1.0, 1));

    auto esher = base_preset("esher", 30000, 100);
    esher.step.orientation = Orientation::metamorphome;
    esher.step.esher_mode = true;
    add(esher);

    add(rhizo_preset("sample50", 10000, 100, 0.5, 1));
    add(rhizo_preset("sample20", 10000, 100, 0.2, 1));
    add(rhizo_preset("pivots2_20pc", 10000, 100, 0.2, 2));
    add(rhizo_preset("pivots4_20pc", 10000, 100, 0.2, 4));

    auto zipf_cells = rhizo_preset("zipf_cells", 50000, 100, 0.2, 2);
    zipf_cells.step.plan.cell_zipf.enabled = true;
    add(zipf_cells);
    auto zipf_lexemes = rhizo_preset("zipf_lexemes", 100000, 100, 0.2, 2);
    zipf_lexemes.step.plan.lexeme_zipf.enabled = true;
    add(zipf_lexemes);

    for (std::size_t k : {20, 40, 60, 80, 90})
        add(edge_preset("edge_partition_k" + std::to_string(k), k));

    add(rhizo_preset("alpha01", 20000, 20, 0.2, 4, 0.1));
    add(rhizo_preset("alpha02", 20000, 20, 0.2, 4, 0.2));
    add(rhizo_preset("alpha05", 50000, 20, 0.2, 4, 0.5));
    add(rhizo_preset("alpha067", 100000, 20, 0.2, 4, 0.67));
    add(rhizo_preset("alpha075", 100000, 20, 0.2, 4, 0.75));

    add(meta_preset("meta_alpha025", 20000, 0.25));
    add(meta_preset("meta_alpha05", 20000, 0.5));
    add(meta_preset("meta_alpha1", 50000, 1.0));
    return presets;
}

const std::map<std::string, SimulationConfig, std::less<>>& presets()
{
    static const auto table = build_presets();
    return table;
}

} // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{
        "am_tidy",           "am_no_tidy",        "esher",             "sample50",
        "sample20",          "pivots2_20pc",      "pivots4_20pc",      "zipf_cells",
        "zipf_lexemes",      "edge_partition_k20", "edge_partition_k40", "edge_partition_k60",
        "edge_partition_k80", "edge_partition_k90", "alpha01",           "alpha02",
        "alpha05",           "alpha067",          "alpha075",          "meta_alpha025",
        "meta_alpha05",      "meta_alpha1",
    };
    return names;
}

SimulationConfig preset_experiment(std::string_view name)
{
    const auto& table = presets();
    auto it = table.find(name);
    if (it == table.end())
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    return it->second;
}

} // namespace morphoevo
