#include "morphoevo/config.hpp"

#include "morphoevo/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>

namespace morphoevo {

namespace {

using Json = nlohmann::ordered_json;

Json zipf_to_json(const ZipfSpec& z)
{
    Json j;
    j["enabled"] = z.enabled;
    j["s"] = z.s;
    j["rank_permutation_seed"] = z.rank_permutation_seed ? Json(*z.rank_permutation_seed) : Json(nullptr);
    return j;
}

/// Walks one JSON object, remembering which keys were read so leftovers can
/// be reported as typos.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where))
    {
        if (!j_.is_object())
            throw SchemaError(label() + " must be an object");
    }

    const Json* get(const std::string& key)
    {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.contains(it.key()))
                throw SchemaError("unknown key '" + path(it.key()) + "'");
    }

    void read(const std::string& key, bool& out)
    {
        if (auto* v = get(key)) {
            if (!v->is_boolean())
                throw SchemaError("'" + path(key) + "' must be a boolean");
            out = v->get<bool>();
        }
    }

    void read(const std::string& key, double& out)
    {
        if (auto* v = get(key)) {
            if (!v->is_number())
                throw SchemaError("'" + path(key) + "' must be a number");
            out = v->get<double>();
        }
    }

    void read(const std::string& key, std::size_t& out)
    {
        if (auto* v = get(key))
            out = static_cast<std::size_t>(as_unsigned(*v, key));
    }

    void read(const std::string& key, std::optional<std::uint64_t>& out)
    {
        if (auto* v = get(key))
            out = v->is_null() ? std::nullopt : std::optional<std::uint64_t>(as_unsigned(*v, key));
    }

    void read(const std::string& key, std::string& out)
    {
        if (auto* v = get(key)) {
            if (!v->is_string())
                throw SchemaError("'" + path(key) + "' must be a string");
            out = v->get<std::string>();
        }
    }

    std::uint64_t as_unsigned(const Json& v, const std::string& key) const
    {
        if (!v.is_number_unsigned())
            throw SchemaError("'" + path(key) + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

private:
    std::string label() const { return where_.empty() ? "config" : "'" + where_ + "'"; }

    const Json& j_;
    std::string where_;
    std::set<std::string> used_;
};

void read_zipf(ObjectReader& parent, const std::string& key, ZipfSpec& out)
{
    if (auto* v = parent.get(key)) {
        ObjectReader r(*v, parent.path(key));
        r.read("enabled", out.enabled);
        r.read("s", out.s);
        r.read("rank_permutation_seed", out.rank_permutation_seed);
        r.finish();
    }
}

void read_step(const Json& j, StepConfig& step)
{
    ObjectReader r(j, "step");
    std::string text;
    if (r.has("orientation")) {
        r.read("orientation", text);
        step.orientation = orientation_from_string(text);
    }
    r.read("alpha", step.alpha);
    if (r.has("candidates")) {
        r.read("candidates", text);
        step.candidates = candidate_rule_from_string(text);
    }
    r.read("num_pivots", step.plan.num_pivots);
    r.read("evidence_fraction", step.plan.evidence_fraction);
    r.read("per_pivot_resample", step.plan.per_pivot_resample);
    r.read("tidy_up", step.tidy_up);
    r.read("esher_mode", step.esher_mode);
    r.read("zipf_weighting", step.zipf_weighting);
    read_zipf(r, "lexeme_zipf", step.plan.lexeme_zipf);
    read_zipf(r, "cell_zipf", step.plan.cell_zipf);
    r.finish();
}

void read_lexicon(const Json& j, LexiconSpec& spec)
{
    ObjectReader r(j, "lexicon");
    r.read("num_lexemes", spec.num_lexemes);
    if (auto* v = r.get("inventory_sizes")) {
        if (!v->is_array())
            throw SchemaError("'lexicon.inventory_sizes' must be an array");
        spec.inventory_sizes.clear();
        for (const auto& item : *v)
            spec.inventory_sizes.push_back(static_cast<std::size_t>(r.as_unsigned(item, "inventory_sizes")));
    }
    r.read("init_seed", spec.init_seed);
    r.finish();
}

void read_halting(const Json& j, Halting& halting)
{
    ObjectReader r(j, "halting");
    if (r.has("kind")) {
        std::string text;
        r.read("kind", text);
        halting.kind = halt_kind_from_string(text);
    }
    r.read("n", halting.n);
    r.finish();
}

SimulationConfig resolve(const Json& doc)
{
    ObjectReader r(doc, "");
    SimulationConfig cfg;
    if (r.has("preset")) {
        std::string name;
        r.read("preset", name);
        const auto& names = preset_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw SchemaError("unknown preset '" + name + "'");
        cfg = preset_experiment(name);
    }
    if (auto* v = r.get("lexicon"))
        read_lexicon(*v, cfg.lexicon);
    if (auto* v = r.get("step"))
        read_step(*v, cfg.step);
    r.read("total_cycles", cfg.total_cycles);
    if (auto* v = r.get("halting"))
        read_halting(*v, cfg.halting);
    if (r.has("total_cycles") && !r.has("metric_interval"))
        cfg.metric_interval = default_metric_interval(cfg.total_cycles);
    r.read("metric_interval", cfg.metric_interval);
    r.read("snapshot_count", cfg.snapshot_count);
    r.read("runs", cfg.runs);
    if (auto* v = r.get("master_seed"))
        cfg.master_seed = r.as_unsigned(*v, "master_seed");
    r.finish();
    validate(cfg);
    return cfg;
}

Json parse_document(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
}

void apply_override(Json& doc, const Override& o)
{
    Json* node = &doc;
    for (std::size_t i = 0; i + 1 < o.path.size(); ++i) {
        if (!node->is_object())
            throw SchemaError("cannot set '" + o.path[i] + "' inside a non-object");
        node = &(*node)[o.path[i]];
        if (node->is_null())
            *node = Json::object();
    }
    if (!node->is_object())
        throw SchemaError("cannot set '" + o.path.back() + "' inside a non-object");
    Json value;
    try {
        value = Json::parse(o.value);
    } catch (const nlohmann::json::parse_error&) {
        value = o.value;
    }
    (*node)[o.path.back()] = std::move(value);
}

} // namespace

std::string config_to_json(const SimulationConfig& cfg)
{
    Json j;
    if (!cfg.preset.empty())
        j["preset"] = cfg.preset;
    j["lexicon"]["num_lexemes"] = cfg.lexicon.num_lexemes;
    j["lexicon"]["inventory_sizes"] = cfg.lexicon.inventory_sizes;
    j["lexicon"]["init_seed"] = cfg.lexicon.init_seed ? Json(*cfg.lexicon.init_seed) : Json(nullptr);
    auto& s = j["step"];
    s["orientation"] = std::string(to_string(cfg.step.orientation));
    s["alpha"] = cfg.step.alpha;
    s["candidates"] = std::string(to_string(cfg.step.candidates));
    s["num_pivots"] = cfg.step.plan.num_pivots;
    s["evidence_fraction"] = cfg.step.plan.evidence_fraction;
    s["per_pivot_resample"] = cfg.step.plan.per_pivot_resample;
    s["tidy_up"] = cfg.step.tidy_up;
    s["esher_mode"] = cfg.step.esher_mode;
    s["zipf_weighting"] = cfg.step.zipf_weighting;
    s["lexeme_zipf"] = zipf_to_json(cfg.step.plan.lexeme_zipf);
    s["cell_zipf"] = zipf_to_json(cfg.step.plan.cell_zipf);
    j["total_cycles"] = cfg.total_cycles;
    j["halting"]["kind"] = std::string(to_string(cfg.halting.kind));
    j["halting"]["n"] = cfg.halting.n;
    j["metric_interval"] = cfg.metric_interval;
    j["snapshot_count"] = cfg.snapshot_count;
    j["runs"] = cfg.runs;
    j["master_seed"] = cfg.master_seed;
    return j.dump(2) + "\n";
}

SimulationConfig config_from_json(std::string_view text)
{
    return resolve(parse_document(text));
}

Override parse_override(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw SchemaError("override '" + std::string(text) + "' must look like key.path=value");
    Override o;
    std::string_view key = text.substr(0, eq);
    while (true) {
        const auto dot = key.find('.');
        auto part = key.substr(0, dot);
        if (part.empty())
            throw SchemaError("override '" + std::string(text) + "' has an empty key segment");
        o.path.emplace_back(part);
        if (dot == std::string_view::npos)
            break;
        key.remove_prefix(dot + 1);
    }
    o.value = std::string(text.substr(eq + 1));
    return o;
}

SimulationConfig load_config(const ConfigSources& sources)
{
    Json doc = Json::object();
    if (!sources.file.empty()) {
        std::ifstream in(sources.file, std::ios::binary);
        if (!in)
            throw MissingFileError("cannot read config file " + sources.file.string());
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        doc = parse_document(text);
        if (!doc.is_object())
            throw SchemaError("config must be an object");
    }
    if (sources.seed_env) {
        const auto& s = *sources.seed_env;
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
            throw SchemaError("MORPHOEVO_SEED must be a non-negative integer, got '" + s + "'");
        doc["master_seed"] = seed;
    }
    for (const auto& o : sources.overrides)
        apply_override(doc, o);
    return resolve(doc);
}

} // namespace morphoevo
