#include "morphoevo/io.hpp"

#include "morphoevo/config.hpp"
#include "morphoevo/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace morphoevo {

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos)
            return fields;
        line.remove_prefix(comma + 1);
    }
}

template <typename T>
T parse_field(std::string_view field, std::string_view what)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw FormatError("bad " + std::string(what) + " field '" + std::string(field) + "'");
    return value;
}

void expect_header(std::istream& in, std::string_view header)
{
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("empty CSV, expected header '" + std::string(header) + "'");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != header)
        throw FormatError("unexpected CSV header '" + line + "'");
}

/// Calls `row` for each non-empty data line.
template <typename F>
void for_each_row(std::istream& in, std::size_t columns, F row)
{
    std::string line;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto fields = split(line);
        if (fields.size() != columns)
            throw FormatError("line " + std::to_string(number) + " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(columns));
        row(fields);
    }
}

} // namespace

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_metrics_csv(std::ostream& out, const std::vector<RunRecord>& runs)
{
    out << kMetricsHeader << '\n';
    for (const auto& run : runs) {
        for (const auto& f : run.frames) {
            out << run.run_id << ',' << f.cycle << ',' << format_number(f.mean_cond_entropy) << ','
                << format_number(f.mean_theils_u) << ',' << f.class_count << ','
                << format_number(f.mean_exponents_per_cell) << ',';
            if (f.turnover)
                out << *f.turnover;
            out << ',' << f.largest_class << ',' << f.second_class << ',' << f.zone_count << '\n';
        }
    }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows)
{
    out << kAggregateHeader << '\n';
    for (const auto& r : rows)
        out << r.cycle << ',' << r.metric << ',' << format_number(r.mean) << ',' << format_number(r.p5) << ','
            << format_number(r.p95) << '\n';
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in)
{
    expect_header(in, kMetricsHeader);
    std::vector<MetricsRow> rows;
    for_each_row(in, 10, [&](const std::vector<std::string_view>& f) {
        MetricsRow r;
        r.run_id = parse_field<std::size_t>(f[0], "run_id");
        r.frame.cycle = parse_field<std::size_t>(f[1], "cycle");
        r.frame.mean_cond_entropy = parse_field<double>(f[2], "mean_cond_entropy");
        r.frame.mean_theils_u = parse_field<double>(f[3], "mean_theils_u");
        r.frame.class_count = parse_field<std::size_t>(f[4], "classes");
        r.frame.mean_exponents_per_cell = parse_field<double>(f[5], "mean_exponents_per_cell");
        if (!f[6].empty())
            r.frame.turnover = parse_field<std::size_t>(f[6], "turnover");
        r.frame.largest_class = parse_field<std::size_t>(f[7], "largest_class");
        r.frame.second_class = parse_field<std::size_t>(f[8], "second_class");
        r.frame.zone_count = parse_field<std::size_t>(f[9], "zones");
        rows.push_back(r);
    });
    return rows;
}

std::vector<AggregateRow> read_aggregate_csv(std::istream& in)
{
    expect_header(in, kAggregateHeader);
    std::vector<AggregateRow> rows;
    for_each_row(in, 5, [&](const std::vector<std::string_view>& f) {
        AggregateRow r;
        r.cycle = parse_field<std::size_t>(f[0], "cycle");
        if (f[1].empty())
            throw FormatError("empty metric name");
        r.metric = std::string(f[1]);
        r.mean = parse_field<double>(f[2], "mean");
        r.p5 = parse_field<double>(f[3], "p5");
        r.p95 = parse_field<double>(f[4], "p95");
        rows.push_back(std::move(r));
    });
    return rows;
}

std::string snapshot_file_name(std::size_t run_id, std::size_t cycle)
{
    return "run" + std::to_string(run_id) + "_cycle" + std::to_string(cycle) + ".csv";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text)
{
    auto tmp = path;
    tmp += ".tmp";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open " + tmp.string() + " for writing");
            out << text;
            out.flush();
            if (!out)
                throw std::runtime_error("write to " + tmp.string() + " failed");
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw;
    }
}

void write_batch(const std::filesystem::path& dir, const BatchResult& batch)
{
    std::filesystem::create_directories(dir / "snapshots");
    std::ostringstream metrics;
    write_metrics_csv(metrics, batch.runs);
    write_file_atomic(dir / "metrics.csv", metrics.str());
    std::ostringstream aggregate;
    write_aggregate_csv(aggregate, batch.aggregate);
    write_file_atomic(dir / "aggregate.csv", aggregate.str());
    for (const auto& run : batch.runs) {
        for (const auto& snap : run.snapshots) {
            std::ostringstream csv;
            write_lexicon_csv(csv, snap.lexicon);
            write_file_atomic(dir / "snapshots" / snapshot_file_name(run.run_id, snap.cycle), csv.str());
        }
    }
    write_file_atomic(dir / "config.json", config_to_json(batch.config));
}

} // namespace morphoevo
