#include "morphoevo/config.hpp"
#include "morphoevo/errors.hpp"
#include "morphoevo/io.hpp"
#include "morphoevo/render.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

using namespace morphoevo;
namespace fs = std::filesystem;

namespace {

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("morphoevo_test_" + name);
    fs::remove_all(dir);
    return dir;
}

BatchResult small_batch()
{
    auto cfg = preset_experiment("am_tidy");
    cfg.total_cycles = 300;
    cfg.metric_interval = 50;
    cfg.runs = 3;
    return run_batch(cfg);
}

} // namespace

TEST(Io, FormatNumberIsShortestRoundTrip)
{
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(3.0), "3");
    for (double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-300}) {
        const auto text = format_number(v);
        EXPECT_EQ(std::stod(text), v);
    }
}

TEST(Io, MetricsCsvRoundTrip)
{
    const auto batch = small_batch();
    std::ostringstream out;
    write_metrics_csv(out, batch.runs);
    std::istringstream in(out.str());
    const auto rows = read_metrics_csv(in);
    std::size_t i = 0;
    for (const auto& run : batch.runs) {
        for (const auto& f : run.frames) {
            ASSERT_LT(i, rows.size());
            EXPECT_EQ(rows[i].run_id, run.run_id);
            EXPECT_EQ(rows[i].frame, f);
            ++i;
        }
    }
    EXPECT_EQ(i, rows.size());
}

TEST(Io, AggregateCsvRoundTrip)
{
    const auto batch = small_batch();
    std::ostringstream out;
    write_aggregate_csv(out, batch.aggregate);
    std::istringstream in(out.str());
    const auto rows = read_aggregate_csv(in);
    ASSERT_EQ(rows.size(), batch.aggregate.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].cycle, batch.aggregate[i].cycle);
        EXPECT_EQ(rows[i].metric, batch.aggregate[i].metric);
        EXPECT_EQ(rows[i].mean, batch.aggregate[i].mean);
        EXPECT_EQ(rows[i].p5, batch.aggregate[i].p5);
        EXPECT_EQ(rows[i].p95, batch.aggregate[i].p95);
    }
}

TEST(Io, MalformedCsvIsRejected)
{
    const std::string header(kAggregateHeader);
    for (const std::string text : {std::string(""), std::string("cycle,metric\n"), header + "\n0,classes,1,2\n",
                                   header + "\nx,classes,1,1,1\n", header + "\n0,,1,1,1\n",
                                   header + "\n0,classes,1,1,1e\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_aggregate_csv(in), FormatError) << text;
    }
    std::istringstream metrics(std::string(kMetricsHeader) + "\n0,0,0,0,3,0,-1,0,0,1\n");
    EXPECT_THROW(read_metrics_csv(metrics), FormatError);
}

TEST(Io, CrlfLinesAreAccepted)
{
    std::istringstream in(std::string(kAggregateHeader) + "\r\n0,classes,2,1,3\r\n");
    const auto rows = read_aggregate_csv(in);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].p95, 3.0);
}

TEST(Io, WriteBatchLayout)
{
    const auto batch = small_batch();
    const auto dir = fresh_dir("layout");
    write_batch(dir, batch);
    EXPECT_TRUE(fs::exists(dir / "metrics.csv"));
    EXPECT_TRUE(fs::exists(dir / "aggregate.csv"));
    EXPECT_EQ(config_from_json(slurp(dir / "config.json")), batch.config);
    std::set<std::string> snaps;
    for (const auto& e : fs::directory_iterator(dir / "snapshots"))
        snaps.insert(e.path().filename().string());
    std::set<std::string> expected;
    for (const auto& run : batch.runs)
        for (const auto& s : run.snapshots)
            expected.insert(snapshot_file_name(run.run_id, s.cycle));
    EXPECT_EQ(snaps, expected);
    EXPECT_EQ(snaps.size(), 3u * 8u);
    for (const auto& e : fs::recursive_directory_iterator(dir))
        EXPECT_NE(e.path().extension(), ".tmp");
    fs::remove_all(dir);
}

TEST(Render, ChartHasOneRibbonAndOneLine)
{
    const std::vector<AggregateRow> rows{
        {0, "classes", 10, 8, 12}, {10, "classes", 6, 4, 9}, {20, "classes", 2, 1, 3}, {0, "zones", 1, 1, 1}};
    const auto svg = render_metric_chart("classes", rows);
    EXPECT_EQ(count(svg, "<polyline"), 1u);
    EXPECT_EQ(count(svg, "<polygon"), 1u);
    const std::regex points("class=\"mean\"[^>]*points=\"([^\"]*)\"");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, points));
    EXPECT_EQ(count(m[1].str(), ","), 3u);
    EXPECT_THROW(render_metric_chart("turnover", rows), std::invalid_argument);
}

TEST(Render, FlatSeriesStillRenders)
{
    const std::vector<AggregateRow> rows{{0, "zones", 1, 1, 1}};
    const auto svg = render_metric_chart("zones", rows);
    EXPECT_EQ(count(svg, "nan"), 0u);
    EXPECT_EQ(count(svg, "inf"), 0u);
}

TEST(Render, UniformHeatmapUsesOneColour)
{
    const Lexicon lex(10, std::vector<std::size_t>(4, 3));
    const auto svg = render_snapshot_heatmap(lex, "uniform");
    const std::regex fill("fill=\"(#[0-9a-f]{6})\"");
    std::set<std::string> colours;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), fill); it != std::sregex_iterator(); ++it)
        colours.insert((*it)[1].str());
    EXPECT_EQ(colours, std::set<std::string>{exponent_colour(0)});
    EXPECT_EQ(count(svg, "<rect"), 40u);
}

TEST(Render, ColoursAreDistinct)
{
    std::set<std::string> colours;
    for (std::size_t i = 0; i < 90; ++i) {
        const auto c = exponent_colour(i);
        EXPECT_TRUE(std::regex_match(c, std::regex("#[0-9a-f]{6}"))) << c;
        colours.insert(c);
    }
    EXPECT_EQ(colours.size(), 90u);
}

TEST(Render, OutputsAreDeterministic)
{
    const auto dir = fresh_dir("render");
    write_batch(dir, small_batch());
    const auto first = render_outputs(dir);
    std::vector<std::string> texts;
    for (const auto& f : first)
        texts.push_back(slurp(f));
    const auto second = render_outputs(dir);
    ASSERT_EQ(first, second);
    for (std::size_t i = 0; i < first.size(); ++i)
        EXPECT_EQ(slurp(second[i]), texts[i]);
    EXPECT_TRUE(fs::exists(dir / "render" / "classes.svg"));
    EXPECT_EQ(first.size(), 8u + 3u * 8u);
    fs::remove_all(dir);
}

TEST(Render, SweepDirectoriesAndErrors)
{
    const auto dir = fresh_dir("sweep");
    write_batch(dir / "alpha_0", small_batch());
    write_batch(dir / "alpha_0.5", small_batch());
    EXPECT_FALSE(render_outputs(dir).empty());
    EXPECT_TRUE(fs::exists(dir / "alpha_0.5" / "render" / "classes.svg"));
    EXPECT_THROW(render_outputs(dir / "nothing_here"), MissingFileError);

    std::ofstream(dir / "alpha_0" / "aggregate.csv") << "garbage\n";
    fs::remove_all(dir / "alpha_0" / "render");
    EXPECT_THROW(render_outputs(dir / "alpha_0"), FormatError);
    EXPECT_FALSE(fs::exists(dir / "alpha_0" / "render"));
    fs::remove_all(dir);
}
