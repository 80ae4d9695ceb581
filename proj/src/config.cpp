#include "geonas/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "geonas/errors.hpp"
#include "geonas/hash.hpp"

namespace geonas::pipeline {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

PipelineConfig::PipelineConfig() {
    forward.reference_h = {5, 3, 3, 1};
    forward.budget.max_trials = 12;
    forward.train.max_epochs = 40;
    inverse.reference_h = {6, 3, 3};
    inverse.budget.max_trials = 12;
    inverse.train.max_epochs = 40;
    final_train.max_epochs = 80;
}

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
    throw ConfigError("config field '" + path + "': " + why);
}

void expect_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) bad_field(path.empty() ? k : path + "." + k, "unknown key");
}

template <typename T>
void read_field(const json& obj, const std::string& path, const std::string& key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const std::exception&) {
        bad_field(path.empty() ? key : path + "." + key, "wrong type");
    }
}

std::vector<int> read_grid(const json& obj, const std::string& path) {
    std::vector<int> grid;
    try {
        grid = obj.get<std::vector<int>>();
    } catch (const std::exception&) {
        bad_field(path, "must be an integer array");
    }
    return grid;
}

arch::SearchSpace read_space(const json& obj, const std::string& path,
                             const std::vector<std::string>& dim_names) {
    std::vector<arch::Dimension> dims;
    std::set<std::string> allowed(dim_names.begin(), dim_names.end());
    expect_keys(obj, path, allowed);
    for (const auto& name : dim_names) {
        if (!obj.contains(name)) bad_field(path + "." + name, "missing dimension grid");
        dims.push_back({name, read_grid(obj.at(name), path + "." + name)});
    }
    try {
        return arch::SearchSpace(std::move(dims));
    } catch (const std::exception& e) {
        bad_field(path, e.what());
    }
}

void read_train(const json& obj, const std::string& path, nn::TrainConfig& t) {
    expect_keys(obj, path,
                {"max_epochs", "batch_size", "learning_rate", "es_threshold", "es_patience"});
    read_field(obj, path, "max_epochs", t.max_epochs);
    read_field(obj, path, "batch_size", t.batch_size);
    read_field(obj, path, "learning_rate", t.learning_rate);
    read_field(obj, path, "es_threshold", t.es_threshold);
    read_field(obj, path, "es_patience", t.es_patience);
}

void read_phase(const json& obj, const std::string& path, PhaseConfig& p,
                const arch::SearchSpace& space) {
    expect_keys(obj, path, {"strategy", "reference_h", "cutoff_factor", "budget", "train"});
    read_field(obj, path, "strategy", p.strategy);
    if (p.strategy != "grid" && p.strategy != "random" && p.strategy != "bayesian")
        bad_field(path + ".strategy", "must be grid, random or bayesian");
    if (obj.contains("reference_h")) {
        const json& h = obj.at("reference_h");
        arch::HyperparamSet point;
        for (const auto& d : space.dims()) {
            if (!h.contains(d.name))
                bad_field(path + ".reference_h." + d.name, "missing value");
            if (!h.at(d.name).is_number_integer())
                bad_field(path + ".reference_h." + d.name, "must be an integer");
            point.push_back(h.at(d.name).get<int>());
        }
        expect_keys(h, path + ".reference_h",
                    [&] {
                        std::set<std::string> s;
                        for (const auto& d : space.dims()) s.insert(d.name);
                        return s;
                    }());
        p.reference_h = std::move(point);
    }
    read_field(obj, path, "cutoff_factor", p.cutoff_factor);
    if (!(p.cutoff_factor > 0.0)) bad_field(path + ".cutoff_factor", "must be positive");
    if (obj.contains("budget")) {
        const json& b = obj.at("budget");
        expect_keys(b, path + ".budget",
                    {"max_trials", "exhaustion_window", "initial_random", "ucb_alpha"});
        read_field(b, path + ".budget", "max_trials", p.budget.max_trials);
        read_field(b, path + ".budget", "exhaustion_window", p.budget.exhaustion_window);
        read_field(b, path + ".budget", "initial_random", p.budget.initial_random);
        read_field(b, path + ".budget", "ucb_alpha", p.budget.ucb_alpha);
    }
    if (obj.contains("train")) read_train(obj.at("train"), path + ".train", p.train);
}

void read_tool(const json& obj, const std::string& path, geo::ToolConfig& t) {
    expect_keys(obj, path, {"version", "rx_pair_m", "sets"});
    read_field(obj, path, "version", t.version);
    read_field(obj, path, "rx_pair_m", t.rx_pair_m);
    if (obj.contains("sets")) {
        const json& sets = obj.at("sets");
        if (!sets.is_array() || sets.size() != 4)
            bad_field(path + ".sets", "must be an array of exactly 4 sets");
        for (size_t i = 0; i < 4; ++i) {
            const std::string sp = path + ".sets[" + std::to_string(i) + "]";
            expect_keys(sets[i], sp, {"name", "spacing_m", "freq_hz"});
            read_field(sets[i], sp, "name", t.sets[i].name);
            read_field(sets[i], sp, "spacing_m", t.sets[i].spacing_m);
            read_field(sets[i], sp, "freq_hz", t.sets[i].freq_hz);
            if (!(t.sets[i].spacing_m > 0.0)) bad_field(sp + ".spacing_m", "must be positive");
            if (!(t.sets[i].freq_hz > 0.0)) bad_field(sp + ".freq_hz", "must be positive");
        }
    }
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config file not found: " + path.string());
    json root;
    try {
        root = json::parse(f);
    } catch (const std::exception& e) {
        throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");

    PipelineConfig cfg;
    expect_keys(root, "",
                {"out_dir", "seed", "width", "deterministic_timing", "dataset", "tool", "spaces",
                 "forward", "inverse", "final_train"});
    std::string out_dir = cfg.out_dir.string();
    read_field(root, "", "out_dir", out_dir);
    cfg.out_dir = out_dir;
    read_field(root, "", "seed", cfg.seed);
    read_field(root, "", "width", cfg.width);
    read_field(root, "", "deterministic_timing", cfg.deterministic_timing);

    if (root.contains("dataset")) {
        const json& d = root.at("dataset");
        expect_keys(d, "dataset",
                    {"tuning_count", "full_count", "calibration_count", "calibration_padding",
                     "tuning_file", "full_file", "validation_file"});
        read_field(d, "dataset", "tuning_count", cfg.tuning_count);
        read_field(d, "dataset", "full_count", cfg.full_count);
        read_field(d, "dataset", "calibration_count", cfg.calibration_count);
        read_field(d, "dataset", "calibration_padding", cfg.calibration_padding);
        read_field(d, "dataset", "tuning_file", cfg.tuning_file);
        read_field(d, "dataset", "full_file", cfg.full_file);
        read_field(d, "dataset", "validation_file", cfg.validation_file);
    }
    if (root.contains("tool")) read_tool(root.at("tool"), "tool", cfg.tool);
    if (root.contains("spaces")) {
        const json& s = root.at("spaces");
        expect_keys(s, "spaces", {"forward", "inverse"});
        if (s.contains("forward"))
            cfg.forward_space = read_space(s.at("forward"), "spaces.forward", {"n", "k0", "k1", "l"});
        if (s.contains("inverse"))
            cfg.inverse_space = read_space(s.at("inverse"), "spaces.inverse", {"n", "k0", "k1"});
    }
    if (root.contains("forward"))
        read_phase(root.at("forward"), "forward", cfg.forward, cfg.forward_space);
    if (root.contains("inverse"))
        read_phase(root.at("inverse"), "inverse", cfg.inverse, cfg.inverse_space);
    if (root.contains("final_train")) read_train(root.at("final_train"), "final_train", cfg.final_train);

    cfg.validate();
    return cfg;
}

void PipelineConfig::validate() const {
    if (width <= 0) throw ConfigError("config field 'width': must be positive");
    if (tuning_count < 5) throw ConfigError("config field 'dataset.tuning_count': must be >= 5");
    if (full_count < 5) throw ConfigError("config field 'dataset.full_count': must be >= 5");
    if (calibration_count < 2)
        throw ConfigError("config field 'dataset.calibration_count': must be >= 2");
    if (!(calibration_padding >= 0.0))
        throw ConfigError("config field 'dataset.calibration_padding': must be non-negative");
    try {
        forward.budget.validate();
        forward.train.validate();
        arch::ForwardHyperparams::from_point(forward.reference_h);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config section 'forward': ") + e.what());
    }
    try {
        inverse.budget.validate();
        inverse.train.validate();
        arch::InverseHyperparams::from_point(inverse.reference_h);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config section 'inverse': ") + e.what());
    }
    try {
        final_train.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config section 'final_train': ") + e.what());
    }
}

std::string PipelineConfig::to_json() const {
    // Plain json (not ordered_json) sorts keys, giving the canonical form.
    json j;
    j["out_dir"] = out_dir.string();
    j["seed"] = seed;
    j["width"] = width;
    j["deterministic_timing"] = deterministic_timing;
    j["dataset"] = {{"tuning_count", tuning_count},
                    {"full_count", full_count},
                    {"calibration_count", calibration_count},
                    {"calibration_padding", calibration_padding},
                    {"tuning_file", tuning_file},
                    {"full_file", full_file},
                    {"validation_file", validation_file}};
    json sets = json::array();
    for (const auto& s : tool.sets)
        sets.push_back({{"name", s.name}, {"spacing_m", s.spacing_m}, {"freq_hz", s.freq_hz}});
    j["tool"] = {{"version", tool.version}, {"rx_pair_m", tool.rx_pair_m}, {"sets", sets}};

    auto space_json = [](const arch::SearchSpace& sp) {
        json o;
        for (const auto& d : sp.dims()) o[d.name] = d.grid;
        return o;
    };
    j["spaces"] = {{"forward", space_json(forward_space)}, {"inverse", space_json(inverse_space)}};

    auto phase_json = [&](const PhaseConfig& p, const arch::SearchSpace& sp) {
        json h;
        for (size_t d = 0; d < sp.dim_count(); ++d) h[sp.dims()[d].name] = p.reference_h[d];
        return json{{"strategy", p.strategy},
                    {"reference_h", h},
                    {"cutoff_factor", p.cutoff_factor},
                    {"budget",
                     {{"max_trials", p.budget.max_trials},
                      {"exhaustion_window", p.budget.exhaustion_window},
                      {"initial_random", p.budget.initial_random},
                      {"ucb_alpha", p.budget.ucb_alpha}}},
                    {"train",
                     {{"max_epochs", p.train.max_epochs},
                      {"batch_size", p.train.batch_size},
                      {"learning_rate", p.train.learning_rate},
                      {"es_threshold", p.train.es_threshold},
                      {"es_patience", p.train.es_patience}}}};
    };
    j["forward"] = phase_json(forward, forward_space);
    j["inverse"] = phase_json(inverse, inverse_space);
    j["final_train"] = {{"max_epochs", final_train.max_epochs},
                        {"batch_size", final_train.batch_size},
                        {"learning_rate", final_train.learning_rate},
                        {"es_threshold", final_train.es_threshold},
                        {"es_patience", final_train.es_patience}};
    return j.dump();
}

uint64_t PipelineConfig::config_hash() const { return fnv1a64(to_json()); }

arch::HyperparamSet parse_point_json(const std::string& text, const arch::SearchSpace& space) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError("hyperparameter override is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("hyperparameter override must be a JSON object");
    arch::HyperparamSet h;
    for (const auto& d : space.dims()) {
        if (!j.contains(d.name))
            throw ConfigError("hyperparameter override missing '" + d.name + "'");
        if (!j.at(d.name).is_number_integer())
            throw ConfigError("hyperparameter override '" + d.name + "' must be an integer");
        h.push_back(j.at(d.name).get<int>());
    }
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const auto& d : space.dims()) known = known || d.name == k;
        if (!known) throw ConfigError("hyperparameter override has unknown key '" + k + "'");
    }
    return h;
}

}  // namespace geonas::pipeline
