#include "morphoevo/render.hpp"

#include "morphoevo/errors.hpp"
#include "morphoevo/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace morphoevo {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 360;
constexpr double kLeft = 64;
constexpr double kRight = 16;
constexpr double kTop = 32;
constexpr double kBottom = 40;

std::string fixed(double v, int decimals = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Tick label with as few decimals as the axis span needs.
std::string tick_label(double v, double span)
{
    if (span >= 50)
        return fixed(v, 0);
    if (span >= 5)
        return fixed(v, 1);
    return fixed(v, 2);
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MissingFileError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void render_batch(const std::filesystem::path& dir, std::vector<std::filesystem::path>& written)
{
    std::istringstream aggregate_text(read_text(dir / "aggregate.csv"));
    const auto rows = read_aggregate_csv(aggregate_text);

    // Snapshots are parsed before anything is written so malformed input
    // leaves no partial render behind.
    std::vector<std::pair<std::string, Lexicon>> snapshots;
    const auto snap_dir = dir / "snapshots";
    if (std::filesystem::is_directory(snap_dir)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(snap_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::istringstream csv(read_text(f));
            try {
                snapshots.emplace_back(f.stem().string(), read_lexicon_csv(csv));
            } catch (const FormatError& e) {
                throw FormatError(f.string() + ": " + e.what());
            }
        }
    }

    std::vector<std::string> metrics;
    for (const auto& r : rows)
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
            metrics.push_back(r.metric);

    const auto out_dir = dir / "render";
    std::filesystem::create_directories(out_dir / "snapshots");
    for (const auto& metric : metrics) {
        const auto path = out_dir / (metric + ".svg");
        write_file_atomic(path, render_metric_chart(metric, rows));
        written.push_back(path);
    }
    for (const auto& [name, lexicon] : snapshots) {
        const auto path = out_dir / "snapshots" / (name + ".svg");
        write_file_atomic(path, render_snapshot_heatmap(lexicon, name));
        written.push_back(path);
    }
}

} // namespace

std::string exponent_colour(std::size_t index)
{
    static constexpr std::array<const char*, 12> palette = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#e7ba52",
    };
    if (index < palette.size())
        return palette[index];
    // Golden-angle hues for large inventories.
    const double h = std::fmod(static_cast<double>(index) * 137.50776405, 360.0) / 60.0;
    const double s = 0.65;
    const double v = index % 2 == 0 ? 0.85 : 0.6;
    const double c = v * s;
    const double x = c * (1 - std::fabs(std::fmod(h, 2.0) - 1));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
    }
    const double m = v - c;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                  static_cast<int>(std::lround((g + m) * 255)), static_cast<int>(std::lround((b + m) * 255)));
    return buf;
}

std::string render_metric_chart(std::string_view metric, const std::vector<AggregateRow>& rows)
{
    std::vector<const AggregateRow*> series;
    for (const auto& r : rows)
        if (r.metric == metric)
            series.push_back(&r);
    if (series.empty())
        throw std::invalid_argument("no rows for metric '" + std::string(metric) + "'");
    std::stable_sort(series.begin(), series.end(),
                     [](const AggregateRow* a, const AggregateRow* b) { return a->cycle < b->cycle; });

    double x0 = static_cast<double>(series.front()->cycle);
    double x1 = static_cast<double>(series.back()->cycle);
    double y0 = series.front()->p5;
    double y1 = series.front()->p95;
    for (const auto* r : series) {
        y0 = std::min({y0, r->p5, r->mean});
        y1 = std::max({y1, r->p95, r->mean});
    }
    if (x1 <= x0)
        x1 = x0 + 1;
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">"
        << escape(metric) << "</text>\n";

    svg << "<polygon class=\"ribbon\" fill=\"#1f77b4\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
    for (const auto* r : series)
        svg << fixed(px(static_cast<double>(r->cycle))) << ',' << fixed(py(r->p95)) << ' ';
    for (auto it = series.rbegin(); it != series.rend(); ++it)
        svg << fixed(px(static_cast<double>((*it)->cycle))) << ',' << fixed(py((*it)->p5))
            << (std::next(it) == series.rend() ? "" : " ");
    svg << "\"/>\n";

    svg << "<polyline class=\"mean\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series.size(); ++i)
        svg << (i ? " " : "") << fixed(px(static_cast<double>(series[i]->cycle))) << ','
            << fixed(py(series[i]->mean));
    svg << "\"/>\n";

    svg << "<g stroke=\"#444444\" font-family=\"sans-serif\" font-size=\"10\">\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
        << kTop + plot_h << "\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
        << "\"/>\n";
    constexpr int ticks = 5;
    for (int t = 0; t < ticks; ++t) {
        const double fx = x0 + (x1 - x0) * t / (ticks - 1);
        const double fy = y0 + (y1 - y0) * t / (ticks - 1);
        svg << "<text x=\"" << fixed(px(fx)) << "\" y=\"" << fixed(kTop + plot_h + 16)
            << "\" text-anchor=\"middle\" stroke=\"none\">" << fixed(fx, 0) << "</text>\n";
        svg << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(fy) + 3)
            << "\" text-anchor=\"end\" stroke=\"none\">" << tick_label(fy, y1 - y0) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 6)
        << "\" text-anchor=\"middle\" stroke=\"none\">cycle</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

std::string render_snapshot_heatmap(const Lexicon& lexicon, std::string_view title)
{
    constexpr double cell_w = 24;
    constexpr double row_h = 6;
    constexpr double top = 24;
    const double width = std::max(160.0, cell_w * static_cast<double>(lexicon.num_cells()));
    const double height = top + row_h * static_cast<double>(lexicon.num_lexemes());

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<text x=\"2\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">" << escape(title) << "</text>\n";
    for (std::size_t l = 0; l < lexicon.num_lexemes(); ++l)
        for (std::size_t c = 0; c < lexicon.num_cells(); ++c)
            svg << "<rect x=\"" << cell_w * static_cast<double>(c) << "\" y=\""
                << top + row_h * static_cast<double>(l) << "\" width=\"" << cell_w << "\" height=\"" << row_h
                << "\" fill=\"" << exponent_colour(lexicon.at(l, c).value) << "\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::filesystem::path> render_outputs(const std::filesystem::path& batch_dir)
{
    std::vector<std::filesystem::path> written;
    if (std::filesystem::exists(batch_dir / "aggregate.csv")) {
        render_batch(batch_dir, written);
        return written;
    }
    if (!std::filesystem::is_directory(batch_dir))
        throw MissingFileError("no such directory " + batch_dir.string());
    std::vector<std::filesystem::path> subdirs;
    for (const auto& entry : std::filesystem::directory_iterator(batch_dir))
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "aggregate.csv"))
            subdirs.push_back(entry.path());
    if (subdirs.empty())
        throw MissingFileError("no aggregate.csv in " + batch_dir.string() + " or its subdirectories");
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& d : subdirs)
        render_batch(d, written);
    return written;
}

} // namespace morphoevo
