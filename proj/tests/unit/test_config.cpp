#include "morphoevo/config.hpp"
#include "morphoevo/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace morphoevo;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& text)
{
    const auto path = fs::temp_directory_path() / ("morphoevo_test_" + name);
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

} // namespace

TEST(Config, RoundTripsEveryPreset)
{
    for (const auto& name : preset_names()) {
        const auto cfg = preset_experiment(name);
        EXPECT_EQ(config_from_json(config_to_json(cfg)), cfg) << name;
    }
}

TEST(Config, RoundTripsNonDefaultFields)
{
    auto cfg = preset_experiment("zipf_lexemes");
    cfg.lexicon.init_seed = 99;
    cfg.step.candidates = CandidateRule::supported;
    cfg.step.plan.per_pivot_resample = true;
    cfg.step.plan.lexeme_zipf.rank_permutation_seed = 5;
    cfg.halting = {HaltKind::unchanged_streak, 40};
    cfg.master_seed = 18446744073709551615ull;
    EXPECT_EQ(config_from_json(config_to_json(cfg)), cfg);
}

TEST(Config, PresetOnlyDocument)
{
    EXPECT_EQ(config_from_json(R"({"preset": "alpha05"})"), preset_experiment("alpha05"));
    EXPECT_EQ(config_from_json("{}"), SimulationConfig{});
}

TEST(Config, OverrideChangesOnlyItsKey)
{
    ConfigSources sources;
    sources.overrides = {parse_override("preset=am_no_tidy"), parse_override("step.alpha=0.5")};
    const auto cfg = load_config(sources);
    auto expected = preset_experiment("am_no_tidy");
    expected.step.alpha = 0.5;
    EXPECT_EQ(cfg, expected);
}

TEST(Config, TotalCyclesAloneResetsTheInterval)
{
    const auto cfg = config_from_json(R"({"preset": "am_tidy", "total_cycles": 100000})");
    EXPECT_EQ(cfg.metric_interval, 200u);
    const auto pinned = config_from_json(R"({"preset": "am_tidy", "total_cycles": 100000, "metric_interval": 7})");
    EXPECT_EQ(pinned.metric_interval, 7u);
}

TEST(Config, SchemaErrors)
{
    EXPECT_THROW(config_from_json(R"({"step": {"alfa": 0.5}})"), SchemaError);
    EXPECT_THROW(config_from_json(R"({"runs": "ten"})"), SchemaError);
    EXPECT_THROW(config_from_json(R"({"runs": -1})"), SchemaError);
    EXPECT_THROW(config_from_json(R"({"step": {"tidy_up": 1}})"), SchemaError);
    EXPECT_THROW(config_from_json(R"({"step": {"orientation": "sideways"}})"), SchemaError);
    EXPECT_THROW(config_from_json(R"({"halting": {"kind": "never"}})"), SchemaError);
    EXPECT_THROW(config_from_json(R"({"preset": "alpha09"})"), SchemaError);
    EXPECT_THROW(config_from_json("[1, 2]"), SchemaError);
    EXPECT_THROW(config_from_json("{not json"), SchemaError);
}

TEST(Config, InfeasibleValuesAreConfigErrors)
{
    EXPECT_THROW(config_from_json(R"({"step": {"num_pivots": 9}})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"runs": 0})"), ConfigError);
    EXPECT_THROW(config_from_json(R"({"lexicon": {"inventory_sizes": []}})"), ConfigError);
}

TEST(Config, SeedPrecedence)
{
    const auto file = temp_file("seed.json", R"({"preset": "am_tidy", "master_seed": 1})");
    ConfigSources sources;
    sources.file = file;
    EXPECT_EQ(load_config(sources).master_seed, 1u);
    sources.seed_env = "2";
    EXPECT_EQ(load_config(sources).master_seed, 2u);
    sources.overrides = {parse_override("master_seed=3")};
    EXPECT_EQ(load_config(sources).master_seed, 3u);
    sources.overrides.clear();
    sources.seed_env = "two";
    EXPECT_THROW(load_config(sources), SchemaError);
    fs::remove(file);
}

TEST(Config, MissingFile)
{
    ConfigSources sources;
    sources.file = fs::temp_directory_path() / "morphoevo_test_does_not_exist.json";
    EXPECT_THROW(load_config(sources), MissingFileError);
}

TEST(Config, ParseOverride)
{
    const auto o = parse_override("step.lexeme_zipf.s=1.5");
    EXPECT_EQ(o.path, (std::vector<std::string>{"step", "lexeme_zipf", "s"}));
    EXPECT_EQ(o.value, "1.5");
    EXPECT_EQ(parse_override("preset=a=b").value, "a=b");
    EXPECT_THROW(parse_override("step.alpha"), SchemaError);
    EXPECT_THROW(parse_override("=1"), SchemaError);
    EXPECT_THROW(parse_override("step..alpha=1"), SchemaError);
}

TEST(Config, OverrideValuesFallBackToStrings)
{
    ConfigSources sources;
    sources.overrides = {parse_override("step.orientation=metamorphome"), parse_override("step.num_pivots=10"),
                         parse_override("step.evidence_fraction=0.8")};
    const auto cfg = load_config(sources);
    EXPECT_EQ(cfg.step.orientation, Orientation::metamorphome);
    EXPECT_EQ(cfg.step.plan.num_pivots, 10u);
}
