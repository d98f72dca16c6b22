#include "morphoevo/lexicon.hpp"

#include "morphoevo/errors.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace morphoevo {

namespace {

void check_inventories(const std::vector<std::size_t>& inventory_sizes)
{
    if (inventory_sizes.size() < 2)
        throw ConfigError("a lexicon needs at least 2 cells");
    for (auto size : inventory_sizes) {
        if (size == 0)
            throw ConfigError("every cell needs at least 1 exponent");
        if (size > std::numeric_limits<std::uint16_t>::max() + std::size_t{1})
            throw ConfigError("cell inventory too large");
    }
}

} // namespace

Lexicon::Lexicon(std::size_t num_lexemes, std::vector<std::size_t> inventory_sizes)
    : num_lexemes_(num_lexemes), inventory_sizes_(std::move(inventory_sizes))
{
    if (num_lexemes_ == 0)
        throw ConfigError("a lexicon needs at least 1 lexeme");
    check_inventories(inventory_sizes_);
    grid_.assign(num_lexemes_ * inventory_sizes_.size(), ExponentId{0});
}

Lexicon Lexicon::from_rows(const std::vector<std::vector<std::uint16_t>>& rows,
                           std::vector<std::size_t> inventory_sizes)
{
    Lexicon lexicon(rows.size(), std::move(inventory_sizes));
    for (std::size_t l = 0; l < rows.size(); ++l) {
        if (rows[l].size() != lexicon.num_cells())
            throw ConfigError("row " + std::to_string(l) + " has the wrong number of cells");
        for (std::size_t c = 0; c < rows[l].size(); ++c)
            lexicon.set(l, c, ExponentId{rows[l][c]});
    }
    return lexicon;
}

void Lexicon::set(std::size_t lexeme, std::size_t cell, ExponentId value)
{
    if (value.value >= inventory_sizes_[cell])
        throw ConfigError("exponent " + std::to_string(value.value) + " outside inventory of cell " +
                          std::to_string(cell));
    grid_[lexeme * num_cells() + cell] = value;
}

ClassSignature Lexicon::signature(std::size_t lexeme) const
{
    auto r = row(lexeme);
    return {r.begin(), r.end()};
}

bool Lexicon::rows_equal(std::size_t a, std::size_t b) const noexcept
{
    auto ra = row(a);
    auto rb = row(b);
    return std::equal(ra.begin(), ra.end(), rb.begin());
}

void Lexicon::erase_lexemes(std::span<const std::size_t> lexemes)
{
    if (lexemes.empty())
        return;
    std::vector<bool> doomed(num_lexemes_, false);
    for (auto l : lexemes)
        doomed[l] = true;
    const auto cells = num_cells();
    std::size_t kept = 0;
    for (std::size_t l = 0; l < num_lexemes_; ++l) {
        if (doomed[l])
            continue;
        if (kept != l)
            std::copy_n(grid_.begin() + static_cast<std::ptrdiff_t>(l * cells), cells,
                        grid_.begin() + static_cast<std::ptrdiff_t>(kept * cells));
        ++kept;
    }
    num_lexemes_ = kept;
    grid_.resize(kept * cells);
}

Lexicon init_random_lexicon(std::size_t num_lexemes, std::size_t num_cells,
                            std::span<const std::size_t> inventory_sizes, Rng& rng)
{
    if (inventory_sizes.size() != num_cells)
        throw ConfigError("inventory_sizes must list one size per cell");
    Lexicon lexicon(num_lexemes, {inventory_sizes.begin(), inventory_sizes.end()});
    for (std::size_t l = 0; l < num_lexemes; ++l)
        for (std::size_t c = 0; c < num_cells; ++c)
            lexicon.set(l, c, ExponentId{static_cast<std::uint16_t>(rng.index(inventory_sizes[c]))});
    return lexicon;
}

std::set<ClassSignature> distinct_classes(const Lexicon& lexicon)
{
    std::set<ClassSignature> classes;
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
        classes.insert(lexicon.signature(l));
    return classes;
}

ClassSignature index_pattern(std::span<const ExponentId> row)
{
    ClassSignature pattern(row.size());
    std::vector<ExponentId> seen;
    for (std::size_t c = 0; c < row.size(); ++c) {
        auto it = std::find(seen.begin(), seen.end(), row[c]);
        if (it == seen.end())
            it = seen.insert(seen.end(), row[c]);
        pattern[c] = ExponentId{static_cast<std::uint16_t>(it - seen.begin())};
    }
    return pattern;
}

Lexicon index_patterns(const Lexicon& lexicon)
{
    const auto& sizes = lexicon.inventory_sizes();
    const auto widest = sizes.empty() ? std::size_t{0} : *std::max_element(sizes.begin(), sizes.end());
    Lexicon out(lexicon.num_lexemes(), std::vector<std::size_t>(sizes.size(), widest));
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l) {
        const auto pattern = index_pattern(lexicon.row(l));
        for (std::size_t c = 0; c < pattern.size(); ++c)
            out.set(l, c, pattern[c]);
    }
    return out;
}

std::set<ExponentId> cell_inventory_observed(const Lexicon& lexicon, std::size_t cell)
{
    if (cell >= lexicon.num_cells())
        throw std::out_of_range("cell index " + std::to_string(cell) + " out of range");
    std::set<ExponentId> seen;
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
        seen.insert(lexicon.at(l, cell));
    return seen;
}

CellPartition zone_partition(const Lexicon& lexicon)
{
    // Columns are equal-as-vectors iff the cells share a zone.
    std::map<std::vector<ExponentId>, std::size_t> block_of_column;
    CellPartition blocks;
    std::vector<ExponentId> column(lexicon.num_lexemes());
    for (std::size_t c = 0; c < lexicon.num_cells(); ++c) {
        for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
            column[l] = lexicon.at(l, c);
        auto [it, inserted] = block_of_column.try_emplace(column, blocks.size());
        if (inserted)
            blocks.emplace_back();
        blocks[it->second].push_back(c);
    }
    return blocks;
}

void write_lexicon_csv(std::ostream& out, const Lexicon& lexicon)
{
    for (std::size_t c = 0; c < lexicon.num_cells(); ++c)
        out << (c ? "," : "") << "cell_" << c;
    out << '\n';
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l) {
        for (std::size_t c = 0; c < lexicon.num_cells(); ++c)
            out << (c ? "," : "") << lexicon.at(l, c).value;
        out << '\n';
    }
}

Lexicon read_lexicon_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("empty lexicon CSV");
    std::size_t cells = 0;
    {
        std::istringstream header(line);
        std::string field;
        while (std::getline(header, field, ',')) {
            if (field != "cell_" + std::to_string(cells))
                throw FormatError("unexpected header field '" + field + "'");
            ++cells;
        }
    }
    std::vector<std::vector<std::uint16_t>> rows;
    std::vector<std::size_t> inventory(cells, 1);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<std::uint16_t> row;
        while (std::getline(fields, field, ',')) {
            std::size_t used = 0;
            unsigned long value = 0;
            try {
                value = std::stoul(field, &used);
            } catch (const std::exception&) {
                throw FormatError("non-integer entry '" + field + "'");
            }
            if (used != field.size() || value > std::numeric_limits<std::uint16_t>::max())
                throw FormatError("bad entry '" + field + "'");
            row.push_back(static_cast<std::uint16_t>(value));
        }
        if (row.size() != cells)
            throw FormatError("row with " + std::to_string(row.size()) + " fields, expected " +
                              std::to_string(cells));
        for (std::size_t c = 0; c < cells; ++c)
            inventory[c] = std::max(inventory[c], std::size_t{row[c]} + 1);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw FormatError("lexicon CSV has no rows");
    try {
        return Lexicon::from_rows(rows, std::move(inventory));
    } catch (const ConfigError& e) {
        throw FormatError(e.what());
    }
}

} // namespace morphoevo
