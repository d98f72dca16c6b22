#pragma once

#include <stdexcept>
#include <string>

namespace morphoevo {

/// Parameters that are well-formed but infeasible (zero counts, too many
/// pivots for the number of cells, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A config document that does not match the schema (unknown key, wrong type).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Input file that could not be opened.
class MissingFileError : public std::runtime_error {
public:
    explicit MissingFileError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed CSV or other emitted artifact read back from disk.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace morphoevo
