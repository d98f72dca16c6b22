#include "morphoevo/combinatorics.hpp"
#include "morphoevo/config.hpp"
#include "morphoevo/errors.hpp"
#include "morphoevo/io.hpp"
#include "morphoevo/render.hpp"
#include "morphoevo/runner.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace morphoevo;

namespace {

enum Exit : int {
    ok = 0,
    failure = 1,
    missing_file = 2,
    schema = 3,
    infeasible = 4,
};

struct CommonOptions {
    std::string config;
    std::string preset;
    std::vector<std::string> sets;
    std::string out;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    bool no_snapshots = false;
    bool verbose = false;
};

void add_common(CLI::App& cmd, CommonOptions& o)
{
    cmd.add_option("--config", o.config, "JSON config file");
    cmd.add_option("--preset", o.preset, "Start from a named preset (same as --set preset=NAME)");
    cmd.add_option("--set", o.sets, "Override a config key, e.g. --set step.alpha=0.5")->take_all();
    cmd.add_option("--out", o.out, "Output directory")->required();
    cmd.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd.add_flag("--no-snapshots", o.no_snapshots, "Skip lexicon snapshots");
    cmd.add_flag("-v,--verbose", o.verbose, "Report each finished run on stderr");
}

SimulationConfig resolve_config(const CommonOptions& o)
{
    ConfigSources sources;
    sources.file = o.config;
    if (!o.preset.empty())
        sources.overrides.push_back({{"preset"}, "\"" + o.preset + "\""});
    for (const auto& s : o.sets)
        sources.overrides.push_back(parse_override(s));
    if (const char* seed = std::getenv("MORPHOEVO_SEED"))
        sources.seed_env = seed;
    return load_config(sources);
}

BatchOptions batch_options(const CommonOptions& o, std::size_t total_runs)
{
    BatchOptions options;
    options.threads = o.threads;
    options.run.capture_snapshots = !o.no_snapshots;
    if (o.verbose) {
        auto done = std::make_shared<std::atomic<std::size_t>>(0);
        auto lock = std::make_shared<std::mutex>();
        options.on_run_done = [done, lock, total_runs](const RunRecord& r) {
            const auto n = ++*done;
            std::lock_guard guard(*lock);
            std::cerr << "run " << r.run_id << " finished at cycle " << r.final_cycle << " (" << n << '/'
                      << total_runs << ")\n";
        };
    }
    return options;
}

void summarise(const BatchResult& batch, const fs::path& dir)
{
    std::size_t single = 0;
    double u = 0;
    for (const auto& r : batch.runs) {
        single += r.final_frame().class_count == 1;
        u += r.final_frame().mean_theils_u;
    }
    const auto n = static_cast<double>(batch.runs.size());
    std::cerr << dir.string() << ": " << batch.runs.size() << " runs, " << single
              << " ending with one class, final mean U " << format_number(u / n) << '\n';
}

int cmd_batch(const CommonOptions& o, std::optional<std::size_t> single_run)
{
    auto cfg = resolve_config(o);
    BatchResult batch;
    if (single_run) {
        RunOptions run_options;
        run_options.capture_snapshots = !o.no_snapshots;
        batch.config = cfg;
        batch.runs.push_back(run_simulation(cfg, *single_run, run_options));
        batch.aggregate = aggregate(batch.runs);
    } else {
        batch = run_batch(cfg, batch_options(o, cfg.runs));
    }
    write_batch(o.out, batch);
    summarise(batch, o.out);
    return ok;
}

std::vector<double> parse_values(const std::string& text)
{
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw SchemaError("bad alpha value '" + item + "'");
        }
        if (used != item.size())
            throw SchemaError("bad alpha value '" + item + "'");
        values.push_back(v);
    }
    if (values.empty())
        throw SchemaError("--values needs at least one alpha");
    return values;
}

int cmd_sweep(const CommonOptions& o, const std::string& values_text)
{
    const auto values = parse_values(values_text);
    for (double alpha : values) {
        auto with_alpha = o;
        with_alpha.sets.push_back("step.alpha=" + format_number(alpha));
        const auto cfg = resolve_config(with_alpha);
        const fs::path dir = fs::path(o.out) / ("alpha_" + format_number(alpha));
        const auto batch = run_batch(cfg, batch_options(o, cfg.runs));
        write_batch(dir, batch);
        summarise(batch, dir);
    }
    return ok;
}

std::string rational_text(const Rational& r)
{
    std::ostringstream s;
    s << r;
    return s.str();
}

int cmd_oracle(std::size_t max_mn)
{
    std::cout << "m,n,k,N,p_i,p_j,p_0,oracle_match\n";
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::size_t violations = 0;
    std::size_t equalities = 0;
    for (std::size_t m = 1; m <= max_mn; ++m) {
        for (std::size_t n = 1; n <= max_mn; ++n) {
            for (std::size_t k = std::max(m, n); k < m * n; ++k) {
                const auto p = contingency_probabilities(m, n, k);
                std::string match = "n/a";
                if (m * n <= 25) {
                    const auto bf = brute_force_counts(m, n, k);
                    const bool same = bf.N == p.N && Rational(bf.same_row, bf.N) == p.p_i &&
                                      Rational(bf.same_col, bf.N) == p.p_j && Rational(bf.other, bf.N) == p.p_0;
                    match = same ? "true" : "false";
                    mismatches += !same;
                }
                const auto check = check_inequality(m, n, k);
                violations += !check.holds;
                equalities += check.holds && !check.strict;
                ++cases;
                std::cout << m << ',' << n << ',' << k << ',' << p.N << ',' << rational_text(p.p_i) << ','
                          << rational_text(p.p_j) << ',' << rational_text(p.p_0) << ',' << match << '\n';
            }
        }
    }
    std::cerr << cases << " cases, " << mismatches << " oracle mismatches; 1 > p_0 >= p_i, p_j fails in "
              << violations << " and holds only with equality in " << equalities << '\n';
    return mismatches == 0 ? ok : failure;
}

int cmd_render(const std::string& dir)
{
    const auto files = render_outputs(dir);
    std::cerr << "wrote " << files.size() << " SVG files\n";
    return ok;
}

std::string preset_footer()
{
    std::string text = "Presets:\n";
    for (const auto& name : preset_names())
        text += "  " + name + "\n";
    text += "\nExit codes: 0 ok, 1 error, 2 missing file, 3 schema error, 4 infeasible parameters.\n"
            "MORPHOEVO_SEED overrides master_seed (before --set).";
    return text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Simulates the evolution of inflectional systems under analogical cell filling."};
    app.footer(preset_footer());
    app.require_subcommand(1);

    CommonOptions common;
    std::size_t run_id = 0;
    auto* run = app.add_subcommand("run", "Execute one run and write its outputs");
    add_common(*run, common);
    run->add_option("--run-id", run_id, "Run index (selects the seed)");

    auto* batch = app.add_subcommand("batch", "Execute all runs of a config and aggregate them");
    add_common(*batch, common);

    std::string values;
    auto* sweep = app.add_subcommand("sweep-alpha", "Run one batch per alpha value into alpha_<value>/");
    add_common(*sweep, common);
    sweep->add_option("--values", values, "Comma-separated alpha values")->required();

    std::size_t max_mn = 4;
    auto* oracle = app.add_subcommand("oracle", "Print four-part analogy probabilities as CSV");
    oracle->add_option("--max-mn", max_mn, "Largest table side")->check(CLI::Range(1, 7));

    std::string render_dir;
    auto* render = app.add_subcommand("render", "Write SVG charts and heatmaps for a batch directory");
    render->add_option("dir", render_dir, "Batch (or sweep) directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_batch(common, run_id);
        if (*batch)
            return cmd_batch(common, std::nullopt);
        if (*sweep)
            return cmd_sweep(common, values);
        if (*oracle)
            return cmd_oracle(max_mn);
        if (*render)
            return cmd_render(render_dir);
    } catch (const MissingFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return missing_file;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return schema;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return schema;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return infeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
