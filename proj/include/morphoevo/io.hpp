#pragma once

#include "morphoevo/runner.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace morphoevo {

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

inline constexpr std::string_view kMetricsHeader =
    "run_id,cycle,mean_cond_entropy,mean_theils_u,classes,mean_exponents_per_cell,turnover,"
    "largest_class,second_class,zones";
inline constexpr std::string_view kAggregateHeader = "cycle,metric,mean,p5,p95";

/// One row per frame, runs in the given order. Absent turnover is an empty field.
void write_metrics_csv(std::ostream& out, const std::vector<RunRecord>& runs);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

struct MetricsRow {
    std::size_t run_id = 0;
    MetricsFrame frame;
};

/// Throw FormatError on a wrong header or malformed row.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<AggregateRow> read_aggregate_csv(std::istream& in);

/// `run<id>_cycle<n>.csv`
std::string snapshot_file_name(std::size_t run_id, std::size_t cycle);

/// Writes metrics.csv, aggregate.csv, config.json and snapshots/ under `dir`
/// (created if needed). Each file is written to a temporary name first and
/// renamed when complete; on failure the temporaries are removed.
void write_batch(const std::filesystem::path& dir, const BatchResult& batch);

/// Writes `text` to `path` via a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

} // namespace morphoevo
