#pragma once

#include "morphoevo/lexicon.hpp"
#include "morphoevo/runner.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace morphoevo {

/// Line chart of one metric: the mean as a polyline over a p5..p95 ribbon.
/// Rows for other metrics are ignored. Throws std::invalid_argument when no
/// row matches.
std::string render_metric_chart(std::string_view metric, const std::vector<AggregateRow>& rows);

/// Lexemes as rows, cells as columns, one fill colour per exponent index.
std::string render_snapshot_heatmap(const Lexicon& lexicon, std::string_view title);

/// Fill colour for an exponent index, as `#rrggbb`.
std::string exponent_colour(std::size_t index);

/// Reads aggregate.csv and snapshots/*.csv from `batch_dir` and writes
/// render/<metric>.svg plus render/snapshots/<name>.svg. A directory without
/// aggregate.csv is treated as a sweep: each subdirectory holding one is
/// rendered in turn. Returns the written files in a stable order.
///
/// Throws MissingFileError when nothing renderable is found, FormatError on
/// malformed CSV.
std::vector<std::filesystem::path> render_outputs(const std::filesystem::path& batch_dir);

} // namespace morphoevo
