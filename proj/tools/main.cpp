#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geonas/errors.hpp"
#include "geonas/pipeline.hpp"
#include "geonas/version.hpp"

namespace {

using geonas::pipeline::PipelineConfig;
namespace files = geonas::pipeline::files;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", opts.config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "run directory (overrides the config)");
    cmd->add_option("--seed", opts.seed, "master seed (overrides the config)");
}

PipelineConfig load(const CommonOpts& opts) {
    PipelineConfig cfg = geonas::pipeline::load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.seed) cfg.seed = *opts.seed;
    cfg.validate();
    return cfg;
}

/// Lock the run directory, execute, then write the command manifest.
template <typename Fn>
void run_command(const PipelineConfig& cfg, const std::string& command,
                 const std::vector<std::string>& outputs, Fn&& body) {
    const std::string started = geonas::pipeline::iso_timestamp();
    geonas::pipeline::RunLock lock(cfg.out_dir);
    body();
    geonas::pipeline::write_manifest(cfg, command, outputs, started,
                                     geonas::pipeline::iso_timestamp());
}

int dispatch(int argc, char** argv) {
    CLI::App app{"geonas: compact network search for borehole resistivity operators"};
    app.set_version_flag("--version", std::string(geonas::kVersion));
    // Long-only help so short flags stay free for options like --h.
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    CommonOpts gen_opts, tune_opts, train_opts, invert_opts;
    int count_override = -1, full_count_override = -1;
    std::string tune_phase = "forward", tune_strategy, train_phase = "forward";
    std::string h_override_text, trajectory_path;

    CLI::App* gen = app.add_subcommand("generate", "synthesize tuning/validation/full datasets");
    add_common(gen, gen_opts);
    gen->add_option("--count", count_override, "tuning draw size (overrides the config)");
    gen->add_option("--full-count", full_count_override, "full dataset size (overrides the config)");

    CLI::App* tune = app.add_subcommand("tune", "search one architecture space");
    add_common(tune, tune_opts);
    tune->add_option("--phase", tune_phase, "forward | inverse")
        ->check(CLI::IsMember({"forward", "inverse"}));
    tune->add_option("--strategy", tune_strategy, "grid | random | bayesian (overrides the config)")
        ->check(CLI::IsMember({"grid", "random", "bayesian"}));

    CLI::App* train = app.add_subcommand("train", "final training on the full dataset");
    add_common(train, train_opts);
    train->add_option("--phase", train_phase, "forward | inverse")
        ->check(CLI::IsMember({"forward", "inverse"}));
    train->add_option("--h", h_override_text,
                      "hyperparameter JSON object instead of the tuning winner");

    CLI::App* invert = app.add_subcommand("invert", "position-wise inversion of a trajectory");
    add_common(invert, invert_opts);
    invert->add_option("--trajectory", trajectory_path, "trajectory CSV file")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (gen->parsed()) {
        PipelineConfig cfg = load(gen_opts);
        if (count_override >= 0) cfg.tuning_count = count_override;
        if (full_count_override >= 0) cfg.full_count = full_count_override;
        cfg.validate();
        run_command(cfg, "generate",
                    {cfg.tuning_file, cfg.validation_file, cfg.full_file}, [&] {
                        geonas::pipeline::run_generate(cfg);
                    });
        std::printf("generate: %d tuning draws (80/20 split) + %d full records -> %s\n",
                    cfg.tuning_count, cfg.full_count, cfg.out_dir.string().c_str());
        return 0;
    }

    if (tune->parsed()) {
        PipelineConfig cfg = load(tune_opts);
        const bool fwd = tune_phase == "forward";
        if (!tune_strategy.empty()) (fwd ? cfg.forward : cfg.inverse).strategy = tune_strategy;
        cfg.validate();
        geonas::pipeline::TuneOutcome out;
        run_command(cfg, "tune-" + tune_phase,
                    {fwd ? files::kForwardTrials : files::kInverseTrials,
                     fwd ? files::kForwardScatter : files::kInverseScatter,
                     fwd ? files::kForwardBest : files::kInverseBest,
                     fwd ? files::kForwardTuningWeights : files::kInverseTuningWeights},
                    [&] { out = geonas::pipeline::run_tune(cfg, tune_phase); });
        const auto& space = fwd ? cfg.forward_space : cfg.inverse_space;
        std::printf("tune %s: best %s  H=%.6g  Np=%lld  score=%.6g  (%zu trials)\n",
                    tune_phase.c_str(), space.format(out.best_h).c_str(), out.best_H,
                    out.best_Np, out.best_score.total, out.trial_count);
        return 0;
    }

    if (train->parsed()) {
        PipelineConfig cfg = load(train_opts);
        const bool fwd = train_phase == "forward";
        std::optional<geonas::arch::HyperparamSet> h_override;
        if (!h_override_text.empty())
            h_override = geonas::pipeline::parse_point_json(
                h_override_text, fwd ? cfg.forward_space : cfg.inverse_space);
        geonas::pipeline::TrainOutcome out;
        run_command(cfg, "train-" + train_phase,
                    {fwd ? files::kForwardFinalWeights : files::kInverseFinalWeights,
                     fwd ? files::kForwardHistory : files::kInverseHistory,
                     fwd ? files::kForwardCrossplot : files::kInverseCrossplot,
                     fwd ? files::kForwardTrainMetrics : files::kInverseTrainMetrics},
                    [&] { out = geonas::pipeline::run_train(cfg, train_phase, h_override); });
        std::printf(
            "train %s: Np=%lld  val %.6g -> %.6g (%.6g/sample)  %d epochs (%s)\n",
            train_phase.c_str(), out.Np, out.initial_val_loss, out.final_val_loss,
            out.mean_val_loss_per_sample, out.epochs, out.stop_reason.c_str());
        return 0;
    }

    PipelineConfig cfg = load(invert_opts);
    size_t rows = 0;
    run_command(cfg, "invert", {files::kInversionProfile}, [&] {
        rows = geonas::pipeline::run_invert(cfg, trajectory_path);
    });
    std::printf("invert: %zu positions -> %s\n", rows,
                (cfg.out_dir / files::kInversionProfile).string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const geonas::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const geonas::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const geonas::RangeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const geonas::DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
