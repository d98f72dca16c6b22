#pragma once

#include "morphoevo/rng.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <vector>

namespace morphoevo {

/// Index of an exponent (or allomorph index) within a cell's inventory.
struct ExponentId {
    std::uint16_t value{};

    friend constexpr auto operator<=>(ExponentId, ExponentId) = default;
};

/// One full row of the grid: the inflectional pattern of a lexeme.
using ClassSignature = std::vector<ExponentId>;

/// Blocks of cell indices; each block is a morphomic zone.
using CellPartition = std::vector<std::vector<std::size_t>>;

/// Rectangular lexemes x cells grid of exponent indices.
///
/// Every entry lies below its cell's inventory size. Rows are stored
/// contiguously so a lexeme's pattern is a span.
class Lexicon {
public:
    /// All entries start at exponent 0.
    Lexicon(std::size_t num_lexemes, std::vector<std::size_t> inventory_sizes);

    /// Builds from explicit rows; throws ConfigError on ragged rows or
    /// entries outside the inventories.
    static Lexicon from_rows(const std::vector<std::vector<std::uint16_t>>& rows,
                             std::vector<std::size_t> inventory_sizes);

    std::size_t num_lexemes() const noexcept { return num_lexemes_; }
    std::size_t num_cells() const noexcept { return inventory_sizes_.size(); }
    const std::vector<std::size_t>& inventory_sizes() const noexcept { return inventory_sizes_; }

    ExponentId at(std::size_t lexeme, std::size_t cell) const noexcept
    {
        return grid_[lexeme * num_cells() + cell];
    }
    /// Throws ConfigError when `value` is outside the cell's inventory.
    void set(std::size_t lexeme, std::size_t cell, ExponentId value);

    std::span<const ExponentId> row(std::size_t lexeme) const noexcept
    {
        return {grid_.data() + lexeme * num_cells(), num_cells()};
    }
    ClassSignature signature(std::size_t lexeme) const;
    bool rows_equal(std::size_t a, std::size_t b) const noexcept;

    /// Removes the given lexemes; remaining rows keep their relative order.
    void erase_lexemes(std::span<const std::size_t> lexemes);

    friend bool operator==(const Lexicon&, const Lexicon&) = default;

private:
    std::size_t num_lexemes_;
    std::vector<std::size_t> inventory_sizes_;
    std::vector<ExponentId> grid_;
};

/// Fills every entry independently and uniformly from its cell's inventory.
Lexicon init_random_lexicon(std::size_t num_lexemes, std::size_t num_cells,
                            std::span<const std::size_t> inventory_sizes, Rng& rng);

std::set<ClassSignature> distinct_classes(const Lexicon& lexicon);

/// Relabels a row's indices in order of first appearance, so (3,1,3,0)
/// becomes (0,1,0,2). Two rows share a pattern iff they split their cells
/// into the same groups.
ClassSignature index_pattern(std::span<const ExponentId> row);

/// Every row replaced by its index_pattern. Each cell of the result has the
/// largest input inventory.
Lexicon index_patterns(const Lexicon& lexicon);

/// Exponents that actually occur in one column.
std::set<ExponentId> cell_inventory_observed(const Lexicon& lexicon, std::size_t cell);

/// Cells i and j share a block iff every lexeme holds the same index in both.
/// Blocks are ordered by their smallest cell.
CellPartition zone_partition(const Lexicon& lexicon);

/// Snapshot CSV: header `cell_0,...,cell_{C-1}`, one row per lexeme.
void write_lexicon_csv(std::ostream& out, const Lexicon& lexicon);

/// Reads a snapshot CSV. Inventory sizes are inferred as (max entry + 1)
/// per column. Throws FormatError on malformed input.
Lexicon read_lexicon_csv(std::istream& in);

} // namespace morphoevo
