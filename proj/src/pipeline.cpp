#include "geonas/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "geonas/errors.hpp"
#include "geonas/hash.hpp"
#include "geonas/loss.hpp"
#include "geonas/textio.hpp"
#include "geonas/version.hpp"
#include "geonas/weights_io.hpp"

namespace geonas::pipeline {

using ordered_json = nlohmann::ordered_json;

namespace {

// Independent seed streams derived from the master seed.
enum Stream : uint64_t {
    kStreamTuningData = 1,
    kStreamFullData = 2,
    kStreamForwardPhase = 3,
    kStreamInversePhase = 4,
    kStreamForwardFinal = 5,
    kStreamInverseFinal = 6,
};

uint64_t point_seed(uint64_t phase_seed, const arch::SearchSpace& space,
                    const arch::HyperparamSet& h) {
    uint64_t state = phase_seed ^ fnv1a64(space.format(h));
    return splitmix64(state);
}

uint64_t hash_weights(nn::Network& net) {
    const std::vector<double> flat = net.save_weights();
    return fnv1a64(std::string_view(reinterpret_cast<const char*>(flat.data()),
                                    flat.size() * sizeof(double)));
}

geo::Dataset require_dataset(const std::filesystem::path& path, const char* what) {
    if (!std::filesystem::exists(path))
        throw UsageError(std::string(what) + " dataset missing (" + path.string() +
                         "); run the generate command first");
    return geo::read_dataset(path);
}

ordered_json load_json_file(const std::filesystem::path& path, const char* what) {
    std::ifstream f(path);
    if (!f)
        throw UsageError(std::string(what) + " missing (" + path.string() +
                         "); run the prerequisite command first");
    try {
        return ordered_json::parse(f);
    } catch (const std::exception& e) {
        throw IoError(path.string() + " unparseable: " + e.what());
    }
}

ordered_json point_json(const arch::SearchSpace& space, const arch::HyperparamSet& h) {
    ordered_json j = ordered_json::object();
    for (size_t d = 0; d < space.dim_count(); ++d) j[space.dims()[d].name] = h[d];
    return j;
}

arch::HyperparamSet point_from_json(const ordered_json& j, const arch::SearchSpace& space) {
    arch::HyperparamSet h;
    for (const auto& d : space.dims()) h.push_back(j.at(d.name).get<int>());
    return h;
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct TrainedPoint {
    nn::Network net;
    nn::TrainResult result;
    double wall_seconds = 0.0;
};

/// Build, seed and train one forward candidate.
TrainedPoint train_forward_point(const arch::HyperparamSet& h, int width,
                                 const nn::TrainConfig& base, double loss_cutoff,
                                 uint64_t seed_h, const nn::Dataset& train_set,
                                 const nn::Dataset& val_set) {
    const auto t0 = std::chrono::steady_clock::now();
    nn::Network net = arch::build_forward_net(arch::ForwardHyperparams::from_point(h), width);
    net.init_weights(seed_h);
    nn::TrainConfig cfg = base;
    cfg.seed = seed_h;
    cfg.loss_cutoff = loss_cutoff;
    nn::NetworkModel model(net);
    nn::TrainResult res = nn::train(model, train_set, val_set, cfg);
    return {std::move(net), std::move(res), elapsed_seconds(t0)};
}

/// Build, seed and train one inverse candidate through the frozen forward.
TrainedPoint train_inverse_point(const arch::HyperparamSet& h, int width,
                                 const nn::TrainConfig& base, double loss_cutoff,
                                 uint64_t seed_h, nn::Network& frozen_forward,
                                 const nn::Dataset& train_set, const nn::Dataset& val_set) {
    const auto t0 = std::chrono::steady_clock::now();
    nn::Network net = arch::build_inverse_net(arch::InverseHyperparams::from_point(h), width);
    net.init_weights(seed_h);
    nn::TrainConfig cfg = base;
    cfg.seed = seed_h;
    cfg.loss_cutoff = loss_cutoff;
    nn::ComposedModel model(net, frozen_forward);
    nn::TrainResult res = nn::train(model, train_set, val_set, cfg);
    return {std::move(net), std::move(res), elapsed_seconds(t0)};
}

void write_history_csv(const std::filesystem::path& path, const nn::TrainHistory& hist) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open history csv: " + path.string());
    f << "epoch,train_loss,val_loss\n";
    for (size_t i = 0; i < hist.val_loss.size(); ++i)
        f << (i + 1) << "," << format_double(hist.train_loss[i]) << ","
          << format_double(hist.val_loss[i]) << "\n";
    if (!f) throw IoError("failed writing history csv: " + path.string());
}

double r_squared(const std::vector<double>& target, const std::vector<double>& pred) {
    double mean = 0.0;
    for (double t : target) mean += t;
    mean /= static_cast<double>(target.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (size_t i = 0; i < target.size(); ++i) {
        ss_tot += (target[i] - mean) * (target[i] - mean);
        ss_res += (target[i] - pred[i]) * (target[i] - pred[i]);
    }
    if (!(ss_tot > 0.0)) return ss_res > 0.0 ? 0.0 : 1.0;
    return 1.0 - ss_res / ss_tot;
}

/// One row per (output, validation sample): ground truth vs prediction with
/// that output's coefficient of determination repeated alongside.
void write_crossplot_csv(const std::filesystem::path& path,
                         const std::vector<std::string>& output_names, nn::Model& model,
                         const nn::Dataset& val_set) {
    const size_t dim = output_names.size();
    std::vector<std::vector<double>> targets(dim), preds(dim);
    for (const auto& s : val_set) {
        const std::vector<double> out = model.forward(s.input);
        for (size_t j = 0; j < dim; ++j) {
            targets[j].push_back(s.target[j]);
            preds[j].push_back(out[j]);
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open crossplot csv: " + path.string());
    f << "output,r_squared,sample,target,predicted\n";
    for (size_t j = 0; j < dim; ++j) {
        const std::string r2 = format_double(r_squared(targets[j], preds[j]));
        for (size_t i = 0; i < targets[j].size(); ++i)
            f << output_names[j] << "," << r2 << "," << i << "," << format_double(targets[j][i])
              << "," << format_double(preds[j][i]) << "\n";
    }
    if (!f) throw IoError("failed writing crossplot csv: " + path.string());
}

const arch::SearchSpace& phase_space(const PipelineConfig& cfg, const std::string& phase) {
    if (phase == "forward") return cfg.forward_space;
    if (phase == "inverse") return cfg.inverse_space;
    throw ConfigError("phase must be 'forward' or 'inverse', got '" + phase + "'");
}

/// Rebuild a network recorded in a JSON artifact and load its weights.
nn::Network load_forward_net(const PipelineConfig& cfg, const ordered_json& rec,
                             const std::filesystem::path& weights) {
    const arch::HyperparamSet h = point_from_json(rec.at("h"), cfg.forward_space);
    const int width = rec.at("width").get<int>();
    nn::Network net =
        arch::build_forward_net(arch::ForwardHyperparams::from_point(h), width);
    if (!std::filesystem::exists(weights))
        throw UsageError("forward weights missing (" + weights.string() +
                         "); run the prerequisite command first");
    nn::load_weights_file(weights, net);
    return net;
}

}  // namespace

// ----------------------------------------------------------- run_generate

void run_generate(const PipelineConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const geo::DipoleSurrogate model(cfg.tool);
    const geo::ScalingTable table =
        geo::ScalingTable::calibrate(model, cfg.calibration_count, cfg.calibration_padding);

    const geo::Dataset tuning_draw = geo::generate_dataset(
        cfg.tuning_count, derive_seed(cfg.seed, kStreamTuningData), model, table);
    auto [tuning, validation] = geo::split_80_20(tuning_draw);
    geo::write_dataset(cfg.tuning_path(), tuning);
    geo::write_dataset(cfg.validation_path(), validation);

    const geo::Dataset full = geo::generate_dataset(
        cfg.full_count, derive_seed(cfg.seed, kStreamFullData), model, table);
    geo::write_dataset(cfg.full_path(), full);
}

// --------------------------------------------------------------- run_tune

TuneOutcome run_tune(const PipelineConfig& cfg, const std::string& phase) {
    const bool is_forward = phase == "forward";
    const arch::SearchSpace& space = phase_space(cfg, phase);
    const PhaseConfig& pc = is_forward ? cfg.forward : cfg.inverse;
    const uint64_t phase_seed =
        derive_seed(cfg.seed, is_forward ? kStreamForwardPhase : kStreamInversePhase);

    const geo::Dataset tuning = require_dataset(cfg.tuning_path(), "tuning");
    const geo::Dataset validation = require_dataset(cfg.validation_path(), "validation");
    const nn::Dataset train_set =
        is_forward ? geo::forward_samples(tuning) : geo::inverse_samples(tuning);
    const nn::Dataset val_set =
        is_forward ? geo::forward_samples(validation) : geo::inverse_samples(validation);

    // The inverse phase trains through the frozen forward tuning winner.
    std::unique_ptr<nn::Network> frozen;
    uint64_t frozen_hash_before = 0;
    if (!is_forward) {
        const ordered_json fwd_best =
            load_json_file(cfg.out_dir / files::kForwardBest, "forward tuning record");
        frozen = std::make_unique<nn::Network>(
            load_forward_net(cfg, fwd_best, cfg.out_dir / files::kForwardTuningWeights));
        frozen_hash_before = hash_weights(*frozen);
    }

    const double inf = std::numeric_limits<double>::infinity();
    auto run_point = [&](const arch::HyperparamSet& h, double cutoff,
                         uint64_t& seed_out) -> TrainedPoint {
        const uint64_t seed_h = point_seed(phase_seed, space, h);
        seed_out = seed_h;
        if (is_forward)
            return train_forward_point(h, cfg.width, pc.train, cutoff, seed_h, train_set,
                                       val_set);
        return train_inverse_point(h, cfg.width, pc.train, cutoff, seed_h, *frozen, train_set,
                                   val_set);
    };

    // Reference architecture: trained once, no cutoff; its loss and size
    // normalize every trial score.
    uint64_t ref_seed = 0;
    TrainedPoint ref_run = run_point(pc.reference_h, inf, ref_seed);
    arch::ReferenceConfig ref;
    ref.h = pc.reference_h;
    ref.H = ref_run.result.best_val_loss;
    ref.Np = static_cast<long long>(ref_run.net.param_count());

    const double cutoff = pc.cutoff_factor * ref.H;
    tuner::TrialEvaluator evaluator = [&](const arch::HyperparamSet& h) -> tuner::EvalOutcome {
        uint64_t seed_h = 0;
        TrainedPoint tp = run_point(h, cutoff, seed_h);
        tuner::EvalOutcome out;
        out.H = tp.result.best_val_loss;
        out.Np = static_cast<long long>(tp.net.param_count());
        out.epochs = tp.result.history.epochs();
        out.wall_seconds = cfg.deterministic_timing ? 0.0 : tp.wall_seconds;
        out.stop_reason = nn::to_string(tp.result.history.stop_reason);
        out.seed = seed_h;
        return out;
    };

    tuner::SearchBudget budget = pc.budget;
    budget.seed = phase_seed;
    tuner::SearchResult search;
    if (pc.strategy == "grid")
        search = tuner::grid_search(space, evaluator, ref, phase_seed);
    else if (pc.strategy == "random")
        search = tuner::random_search(space, evaluator, ref, budget);
    else
        search = tuner::bayesian_search(space, evaluator, ref, budget);

    if (!is_forward && hash_weights(*frozen) != frozen_hash_before)
        throw UsageError("frozen forward weights changed during inverse tuning");

    // Retrain the winner (same derived seed, so it reproduces its trial) and
    // persist its weights for the next phase.
    uint64_t best_seed = 0;
    TrainedPoint best_run = run_point(search.best, cutoff, best_seed);

    const auto trials_path = cfg.out_dir / (is_forward ? files::kForwardTrials : files::kInverseTrials);
    const auto scatter_path =
        cfg.out_dir / (is_forward ? files::kForwardScatter : files::kInverseScatter);
    const auto best_path = cfg.out_dir / (is_forward ? files::kForwardBest : files::kInverseBest);
    const auto weights_path =
        cfg.out_dir / (is_forward ? files::kForwardTuningWeights : files::kInverseTuningWeights);

    tuner::write_trial_log(trials_path, space, search.trials);
    tuner::write_score_scatter_csv(scatter_path, search.trials);
    nn::save_weights_file(weights_path, best_run.net);

    TuneOutcome out;
    out.best_h = search.best;
    out.best_H = best_run.result.best_val_loss;
    out.best_Np = static_cast<long long>(best_run.net.param_count());
    out.best_score = search.best_score;
    out.reference = ref;
    out.trial_count = search.trials.size();

    ordered_json best;
    best["phase"] = phase;
    best["strategy"] = pc.strategy;
    best["width"] = cfg.width;
    best["seed"] = phase_seed;
    best["h"] = point_json(space, search.best);
    best["H"] = out.best_H;
    best["Np"] = out.best_Np;
    best["score"] = ordered_json{{"error_term", search.best_score.relative_error},
                                 {"size_term", search.best_score.relative_size_decrease},
                                 {"total", search.best_score.total}};
    best["reference"] =
        ordered_json{{"h", point_json(space, ref.h)},
                     {"H", ref.H},
                     {"Np", ref.Np},
                     {"epochs", ref_run.result.history.epochs()},
                     {"stop_reason", nn::to_string(ref_run.result.history.stop_reason)}};
    best["trials"] = search.trials.size();
    std::ofstream bf(best_path, std::ios::binary);
    if (!bf) throw IoError("cannot open " + best_path.string());
    bf << best.dump(2) << "\n";
    if (!bf) throw IoError("failed writing " + best_path.string());

    return out;
}

// -------------------------------------------------------------- run_train

TrainOutcome run_train(const PipelineConfig& cfg, const std::string& phase,
                       const std::optional<arch::HyperparamSet>& h_override) {
    const bool is_forward = phase == "forward";
    const arch::SearchSpace& space = phase_space(cfg, phase);

    const geo::Dataset full = require_dataset(cfg.full_path(), "full");
    const geo::Dataset validation = require_dataset(cfg.validation_path(), "validation");
    const nn::Dataset train_set =
        is_forward ? geo::forward_samples(full) : geo::inverse_samples(full);
    const nn::Dataset val_set =
        is_forward ? geo::forward_samples(validation) : geo::inverse_samples(validation);

    arch::HyperparamSet h;
    if (h_override) {
        h = *h_override;
    } else {
        const ordered_json best = load_json_file(
            cfg.out_dir / (is_forward ? files::kForwardBest : files::kInverseBest),
            is_forward ? "forward tuning record" : "inverse tuning record");
        h = point_from_json(best.at("h"), space);
    }

    const uint64_t seed =
        derive_seed(cfg.seed, is_forward ? kStreamForwardFinal : kStreamInverseFinal);
    nn::TrainConfig tc = cfg.final_train;
    tc.seed = seed;  // loss_cutoff stays disabled for final training

    std::unique_ptr<nn::Network> frozen;
    uint64_t frozen_hash_before = 0;
    nn::Network net = is_forward
                          ? arch::build_forward_net(arch::ForwardHyperparams::from_point(h),
                                                    cfg.width)
                          : arch::build_inverse_net(arch::InverseHyperparams::from_point(h),
                                                    cfg.width);
    net.init_weights(seed);

    std::unique_ptr<nn::Model> model;
    if (is_forward) {
        model = std::make_unique<nn::NetworkModel>(net);
    } else {
        const ordered_json fwd_metrics =
            load_json_file(cfg.out_dir / files::kForwardTrainMetrics, "forward training record");
        frozen = std::make_unique<nn::Network>(
            load_forward_net(cfg, fwd_metrics, cfg.out_dir / files::kForwardFinalWeights));
        frozen_hash_before = hash_weights(*frozen);
        model = std::make_unique<nn::ComposedModel>(net, *frozen);
    }

    const double initial_val = nn::total_loss(*model, val_set);
    nn::TrainResult res = nn::train(*model, train_set, val_set, tc);

    if (!is_forward && hash_weights(*frozen) != frozen_hash_before)
        throw UsageError("frozen forward weights changed during inverse training");

    const auto weights_path =
        cfg.out_dir / (is_forward ? files::kForwardFinalWeights : files::kInverseFinalWeights);
    const auto history_path =
        cfg.out_dir / (is_forward ? files::kForwardHistory : files::kInverseHistory);
    const auto crossplot_path =
        cfg.out_dir / (is_forward ? files::kForwardCrossplot : files::kInverseCrossplot);
    const auto metrics_path =
        cfg.out_dir / (is_forward ? files::kForwardTrainMetrics : files::kInverseTrainMetrics);

    nn::save_weights_file(weights_path, net);
    write_history_csv(history_path, res.history);

    // Cross-plots: the forward phase compares the 13 re-simulated channels;
    // the inverse phase compares the 5 predicted formation parameters.
    if (is_forward) {
        std::vector<std::string> names;
        for (int j = 1; j <= 13; ++j) names.push_back("m" + std::to_string(j));
        write_crossplot_csv(crossplot_path, names, *model, val_set);
    } else {
        nn::NetworkModel direct(net);  // parameter predictions, not the composition
        nn::Dataset param_val;
        for (const auto& r : validation.records) {
            nn::TrainSample s;
            s.input.assign(r.m.begin(), r.m.end());
            s.input.push_back(r.t);
            s.target.assign(r.p.begin(), r.p.end());
            param_val.push_back(std::move(s));
        }
        write_crossplot_csv(crossplot_path, {"rho_c", "rho_u", "rho_l", "d_u", "d_l"}, direct,
                            param_val);
    }

    TrainOutcome out;
    out.h = h;
    out.Np = static_cast<long long>(net.param_count());
    out.initial_val_loss = initial_val;
    out.final_val_loss = res.best_val_loss;
    out.mean_val_loss_per_sample = res.best_val_loss / static_cast<double>(val_set.size());
    out.epochs = res.history.epochs();
    out.stop_reason = nn::to_string(res.history.stop_reason);

    ordered_json metrics;
    metrics["phase"] = phase;
    metrics["h"] = point_json(space, h);
    metrics["width"] = cfg.width;
    metrics["seed"] = seed;
    metrics["Np"] = out.Np;
    metrics["initial_val_loss"] = out.initial_val_loss;
    metrics["final_val_loss"] = out.final_val_loss;
    metrics["mean_val_loss_per_sample"] = out.mean_val_loss_per_sample;
    metrics["val_samples"] = val_set.size();
    metrics["epochs"] = out.epochs;
    metrics["stop_reason"] = out.stop_reason;
    if (!is_forward) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(frozen_hash_before));
        metrics["forward_weights_fnv"] = buf;
    }
    std::ofstream mf(metrics_path, std::ios::binary);
    if (!mf) throw IoError("cannot open " + metrics_path.string());
    mf << metrics.dump(2) << "\n";
    if (!mf) throw IoError("failed writing " + metrics_path.string());

    return out;
}

// ------------------------------------------------------------- run_invert

size_t run_invert(const PipelineConfig& cfg, const std::filesystem::path& trajectory_csv) {
    const ordered_json fwd_metrics =
        load_json_file(cfg.out_dir / files::kForwardTrainMetrics, "forward training record");
    const ordered_json inv_metrics =
        load_json_file(cfg.out_dir / files::kInverseTrainMetrics, "inverse training record");

    nn::Network fwd =
        load_forward_net(cfg, fwd_metrics, cfg.out_dir / files::kForwardFinalWeights);
    const arch::HyperparamSet h_i = point_from_json(inv_metrics.at("h"), cfg.inverse_space);
    nn::Network inv = arch::build_inverse_net(arch::InverseHyperparams::from_point(h_i),
                                              inv_metrics.at("width").get<int>());
    {
        const auto w = cfg.out_dir / files::kInverseFinalWeights;
        if (!std::filesystem::exists(w))
            throw UsageError("inverse weights missing (" + w.string() +
                             "); run the prerequisite command first");
        nn::load_weights_file(w, inv);
    }

    std::ifstream f(trajectory_csv);
    if (!f) throw ConfigError("trajectory file not found: " + trajectory_csv.string());
    std::string line;
    if (!std::getline(f, line))
        throw ConfigError("trajectory line 1: empty file");
    {
        std::string expect = "hd_m,tvd_m,dip_deg";
        for (int j = 1; j <= 13; ++j) expect += ",m" + std::to_string(j);
        if (line != expect)
            throw ConfigError("trajectory line 1: header must be '" + expect + "'");
    }

    const geo::ScalingTable table;  // formation/dip maps are analytic
    const auto profile_path = cfg.out_dir / files::kInversionProfile;
    std::ofstream out(profile_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + profile_path.string());
    out << "hd_m,tvd_m,dip_deg,rho_c,rho_u,rho_l,d_u,d_l,clamped,misfit_l1\n";

    size_t rows = 0;
    int line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                v.push_back(parse_double(tok));
            } catch (const std::exception&) {
                throw ConfigError("trajectory line " + std::to_string(line_no) +
                                  ": malformed number '" + tok + "'");
            }
        }
        if (v.size() != 16)
            throw ConfigError("trajectory line " + std::to_string(line_no) + ": expected 16 " +
                              "comma-separated values, got " + std::to_string(v.size()));

        double t_scaled;
        try {
            t_scaled = table.scale_dip(v[2]);
        } catch (const RangeError& e) {
            throw ConfigError("trajectory line " + std::to_string(line_no) + ": " + e.what());
        }

        std::vector<double> inv_in(v.begin() + 3, v.begin() + 16);
        inv_in.push_back(t_scaled);
        const std::vector<double> p_scaled = inv.forward(inv_in);

        bool clamped = false;
        std::array<double, 5> ps;
        std::copy(p_scaled.begin(), p_scaled.end(), ps.begin());
        const geo::FormationParams phys = table.unscale_formation_clamped(ps, clamped);

        // Re-simulate the reported (clamped) parameters through the forward net.
        std::array<double, 5> ps_clamped = ps;
        for (double& x : ps_clamped) x = std::min(1.5, std::max(0.5, x));
        std::vector<double> fwd_in(ps_clamped.begin(), ps_clamped.end());
        fwd_in.push_back(t_scaled);
        const std::vector<double> m_hat = fwd.forward(fwd_in);
        const std::vector<double> m_obs(v.begin() + 3, v.begin() + 16);
        const double misfit = nn::l1_loss(m_hat, m_obs);

        out << format_double(v[0]) << "," << format_double(v[1]) << "," << format_double(v[2])
            << "," << format_double(phys.rho_c) << "," << format_double(phys.rho_u) << ","
            << format_double(phys.rho_l) << "," << format_double(phys.d_u) << ","
            << format_double(phys.d_l) << "," << (clamped ? 1 : 0) << ","
            << format_double(misfit) << "\n";
        ++rows;
    }
    if (!out) throw IoError("failed writing " + profile_path.string());
    return rows;
}

// --------------------------------------------------------------- manifest

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const PipelineConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs, const std::string& started,
                    const std::string& ended) {
    ordered_json m;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    m["command"] = command;
    m["config_hash"] = hash_buf;
    m["seed"] = cfg.seed;
    m["versions"] = ordered_json{{"geonas", kVersion},
                                 {"dataset_format", kDatasetFormatVersion},
                                 {"weights_format", kWeightsFormatVersion}};
    m["started"] = started;
    m["ended"] = ended;
    m["outputs"] = outputs;
    const auto path = cfg.out_dir / ("manifest-" + command + ".json");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    f << m.dump(2) << "\n";
    if (!f) throw IoError("failed writing " + path.string());
}

// ------------------------------------------------------------------- lock

RunLock::RunLock(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    path_ = dir / ".geonas.lock";
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f)
        throw IoError("run directory is locked by another command (" + path_.string() + ")");
    std::fclose(f);
}

RunLock::~RunLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
}

}  // namespace geonas::pipeline
