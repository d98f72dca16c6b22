#pragma once

#include "morphoevo/runner.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morphoevo {

/// Full JSON document for `cfg`; every field is written, so parsing the
/// result gives back `cfg` exactly.
std::string config_to_json(const SimulationConfig& cfg);

/// Resolves a config document. A `"preset"` key selects the starting point
/// (defaults otherwise) and the remaining keys overwrite it. Unknown keys and
/// wrong types throw SchemaError; infeasible values throw ConfigError.
///
/// When the document sets total_cycles but not metric_interval, the interval
/// follows default_metric_interval.
SimulationConfig config_from_json(std::string_view text);

/// `key.path=value` assignments applied to the document before resolution.
/// The value is read as JSON when it parses, else as a plain string, so
/// `step.alpha=0.5` and `preset=am_tidy` both work.
struct Override {
    std::vector<std::string> path;
    std::string value;
};

/// Throws SchemaError on text without '=' or with an empty key.
Override parse_override(std::string_view text);

struct ConfigSources {
    /// Config file; empty path means start from an empty document.
    std::filesystem::path file;
    std::vector<Override> overrides;
    /// Value of MORPHOEVO_SEED, if set. Applied before the overrides.
    std::optional<std::string> seed_env;
};

/// Throws MissingFileError when the file cannot be read, SchemaError,
/// ConfigError as for config_from_json.
SimulationConfig load_config(const ConfigSources& sources);

} // namespace morphoevo
