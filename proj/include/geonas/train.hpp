#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "geonas/model.hpp"

namespace geonas::nn {

struct TrainSample {
    std::vector<double> input;
    std::vector<double> target;
};

using Dataset = std::vector<TrainSample>;

struct TrainConfig {
    int max_epochs = 100;
    int batch_size = 128;
    double learning_rate = 1e-3;
    double es_threshold = 1e-3;
    int es_patience = 30;
    // Validation loss at or below this value stops the run; +inf disables it.
    double loss_cutoff = std::numeric_limits<double>::infinity();
    uint64_t seed = 0;

    void validate() const;
};

enum class StopReason { max_epochs, early_stop, loss_cutoff };

const char* to_string(StopReason r);

struct TrainHistory {
    std::vector<double> train_loss;  // mean per-sample L1 across the epoch
    std::vector<double> val_loss;    // summed L1 over the validation set
    StopReason stop_reason = StopReason::max_epochs;

    int epochs() const { return static_cast<int>(val_loss.size()); }
};

struct TrainResult {
    std::vector<double> best_weights;  // flat, declaration order
    TrainHistory history;
    double best_val_loss = 0.0;
};

/// Adaptive-moment gradient descent (beta1 0.9, beta2 0.999, eps 1e-8)
/// with bias correction, over a fixed list of parameter blocks.
class Adam {
public:
    Adam(std::vector<ParamView> params, double learning_rate);
    void step();

private:
    std::vector<ParamView> params_;
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long step_count_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

/// Mini-batch training of `model` against L1 loss. Per epoch: shuffle,
/// sweep batches, then score the validation set (summed L1). Stops at
/// max_epochs, on early stopping (|change in validation loss| below
/// es_threshold for es_patience consecutive epochs), or when validation
/// loss reaches loss_cutoff. The model is left holding, and the result
/// carries, the weights of the best validation epoch. Deterministic given
/// config.seed.
TrainResult train(Model& model, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& config);

/// Summed L1 loss of the model over a dataset (validation semantics).
double total_loss(Model& model, const Dataset& set);

/// Compare reverse-mode gradients of the single-sample L1 loss against
/// central finite differences on a random subset (>= 50 when available) of
/// parameters. Returns the max relative error with denominator
/// max(|g|, |g_fd|, 1e-8).
double gradient_check(Model& model, const TrainSample& sample, double epsilon,
                      uint64_t seed = 0x9e3779b9);

}  // namespace geonas::nn
