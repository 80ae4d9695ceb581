#pragma once

#include <optional>
#include <string>

#include "geonas/config.hpp"

namespace geonas::pipeline {

/// File names inside the run directory.
namespace files {
inline constexpr const char* kForwardTrials = "forward_trials.jsonl";
inline constexpr const char* kInverseTrials = "inverse_trials.jsonl";
inline constexpr const char* kForwardScatter = "forward_scatter.csv";
inline constexpr const char* kInverseScatter = "inverse_scatter.csv";
inline constexpr const char* kForwardBest = "forward_best.json";
inline constexpr const char* kInverseBest = "inverse_best.json";
inline constexpr const char* kForwardTuningWeights = "forward_tuning_weights.bin";
inline constexpr const char* kInverseTuningWeights = "inverse_tuning_weights.bin";
inline constexpr const char* kForwardFinalWeights = "forward_final_weights.bin";
inline constexpr const char* kInverseFinalWeights = "inverse_final_weights.bin";
inline constexpr const char* kForwardHistory = "forward_history.csv";
inline constexpr const char* kInverseHistory = "inverse_history.csv";
inline constexpr const char* kForwardCrossplot = "forward_crossplot.csv";
inline constexpr const char* kInverseCrossplot = "inverse_crossplot.csv";
inline constexpr const char* kForwardTrainMetrics = "forward_train_metrics.json";
inline constexpr const char* kInverseTrainMetrics = "inverse_train_metrics.json";
inline constexpr const char* kInversionProfile = "inversion_profile.csv";
}  // namespace files

/// Generate tuning/validation (80/20 split of the tuning draw) and full
/// datasets into the run directory.
void run_generate(const PipelineConfig& cfg);

struct TuneOutcome {
    arch::HyperparamSet best_h;
    double best_H = 0.0;
    long long best_Np = 0;
    tuner::ScoreBreakdown best_score;
    arch::ReferenceConfig reference;
    size_t trial_count = 0;
};

/// Run one tuning phase: train the reference architecture, search the
/// space with the configured strategy (trial cutoff at cutoff_factor times
/// the reference loss), retrain the winner, persist log + scatter + best
/// record + tuning weights. The inverse phase requires completed forward
/// tuning artifacts and trains through the frozen forward network.
TuneOutcome run_tune(const PipelineConfig& cfg, const std::string& phase);

struct TrainOutcome {
    arch::HyperparamSet h;
    long long Np = 0;
    double initial_val_loss = 0.0;
    double final_val_loss = 0.0;
    double mean_val_loss_per_sample = 0.0;
    int epochs = 0;
    std::string stop_reason;
};

/// Final training of one operator on the full dataset (tuning winner by
/// default, explicit h override otherwise). The inverse phase loads the
/// final forward weights and trains the composition against measurement
/// misfit, leaving the forward weights bit-identical.
TrainOutcome run_train(const PipelineConfig& cfg, const std::string& phase,
                       const std::optional<arch::HyperparamSet>& h_override);

/// Position-wise inversion of a trajectory file (columns hd_m, tvd_m,
/// dip_deg, m1..m13 scaled): predicted physical formation parameters with
/// range clamping and the L1 re-simulation misfit per position. Returns the
/// number of positions.
size_t run_invert(const PipelineConfig& cfg, const std::filesystem::path& trajectory_csv);

/// Write the per-command run manifest (config hash, seed, versions,
/// timestamps, outputs).
void write_manifest(const PipelineConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs, const std::string& started,
                    const std::string& ended);

/// Current UTC time, ISO 8601.
std::string iso_timestamp();

/// Exclusive lock on the run directory for the lifetime of the object.
class RunLock {
public:
    explicit RunLock(const std::filesystem::path& dir);
    ~RunLock();
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    std::filesystem::path path_;
};

}  // namespace geonas::pipeline
