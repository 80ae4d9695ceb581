#include "geonas/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geonas/errors.hpp"
#include "geonas/loss.hpp"
#include "geonas/rng.hpp"

namespace geonas::nn {

void TrainConfig::validate() const {
    if (max_epochs < 0) throw ConfigError("max_epochs must be non-negative");
    if (batch_size <= 0) throw ConfigError("batch_size must be positive");
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
    if (es_threshold <= 0.0) throw ConfigError("es_threshold must be positive");
    if (es_patience < 1) throw ConfigError("es_patience must be >= 1");
    if (loss_cutoff < 0.0) throw ConfigError("loss_cutoff must be non-negative");
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::max_epochs: return "max_epochs";
        case StopReason::early_stop: return "early_stop";
        case StopReason::loss_cutoff: return "loss_cutoff";
    }
    return "unknown";
}

Adam::Adam(std::vector<ParamView> params, double learning_rate)
    : params_(std::move(params)), lr_(learning_rate) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const auto& p : params_) {
        m_.emplace_back(p.weights.size(), 0.0);
        v_.emplace_back(p.weights.size(), 0.0);
    }
}

void Adam::step() {
    ++step_count_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_count_));
    for (size_t b = 0; b < params_.size(); ++b) {
        auto& w = params_[b].weights;
        auto& g = params_[b].grads;
        auto& m = m_[b];
        auto& v = v_[b];
        for (size_t i = 0; i < w.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            w[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

double total_loss(Model& model, const Dataset& set) {
    double s = 0.0;
    for (const auto& sample : set) s += l1_loss(model.forward(sample.input), sample.target);
    return s;
}

TrainResult train(Model& model, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& config) {
    config.validate();
    if (train_set.empty() || val_set.empty()) throw ConfigError("datasets must be non-empty");

    Rng rng(config.seed);
    Adam opt(model.trainable_params(), config.learning_rate);

    TrainResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();

    std::vector<size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    auto record_epoch = [&](double train_loss, double val_loss, int epoch) {
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw TrainingDivergedError(epoch, "non-finite loss at epoch " +
                                                   std::to_string(epoch));
        result.history.train_loss.push_back(train_loss);
        result.history.val_loss.push_back(val_loss);
        if (val_loss < result.best_val_loss) {
            result.best_val_loss = val_loss;
            result.best_weights = model.save_weights();
        }
    };

    if (config.max_epochs == 0) {
        // No training: history is the single row of initial losses.
        const double tl =
            total_loss(model, train_set) / static_cast<double>(train_set.size());
        record_epoch(tl, total_loss(model, val_set), 0);
        result.history.stop_reason = StopReason::max_epochs;
        return result;
    }

    double prev_val = 0.0;
    int flat_streak = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        size_t pos = 0;
        while (pos < order.size()) {
            const size_t n = std::min<size_t>(config.batch_size, order.size() - pos);
            model.zero_grads();
            const double inv_n = 1.0 / static_cast<double>(n);
            for (size_t b = 0; b < n; ++b) {
                const TrainSample& s = train_set[order[pos + b]];
                std::vector<double> out = model.forward(s.input);
                epoch_loss += l1_loss(out, s.target);
                std::vector<double> g = l1_loss_grad(out, s.target);
                for (double& x : g) x *= inv_n;
                model.backward(g);
            }
            opt.step();
            pos += n;
        }
        const double train_loss = epoch_loss / static_cast<double>(train_set.size());
        const double val_loss = total_loss(model, val_set);
        record_epoch(train_loss, val_loss, epoch);

        if (std::isfinite(config.loss_cutoff) && val_loss <= config.loss_cutoff) {
            result.history.stop_reason = StopReason::loss_cutoff;
            break;
        }
        if (epoch > 1 && std::fabs(val_loss - prev_val) < config.es_threshold) {
            if (++flat_streak >= config.es_patience) {
                result.history.stop_reason = StopReason::early_stop;
                break;
            }
        } else if (epoch > 1) {
            flat_streak = 0;
        }
        prev_val = val_loss;
        if (epoch == config.max_epochs) result.history.stop_reason = StopReason::max_epochs;
    }

    model.load_weights(result.best_weights);
    return result;
}

double gradient_check(Model& model, const TrainSample& sample, double epsilon, uint64_t seed) {
    if (epsilon <= 0.0) throw ConfigError("epsilon must be positive");

    model.zero_grads();
    std::vector<double> out = model.forward(sample.input);
    model.backward(l1_loss_grad(out, sample.target));

    auto blocks = model.trainable_params();
    size_t total = 0;
    for (const auto& b : blocks) total += b.weights.size();
    if (total == 0) return 0.0;

    // Pick the probe set: everything when small, else 50 distinct indices.
    std::vector<size_t> probe;
    if (total <= 50) {
        probe.resize(total);
        std::iota(probe.begin(), probe.end(), 0);
    } else {
        Rng rng(seed);
        std::vector<bool> seen(total, false);
        while (probe.size() < 50) {
            const size_t i = static_cast<size_t>(rng.below(total));
            if (!seen[i]) {
                seen[i] = true;
                probe.push_back(i);
            }
        }
    }

    auto locate = [&](size_t flat) -> std::pair<double*, double> {
        size_t off = 0;
        for (const auto& b : blocks) {
            if (flat < off + b.weights.size())
                return {&b.weights[flat - off], b.grads[flat - off]};
            off += b.weights.size();
        }
        throw DimensionError("parameter index out of range");
    };

    double worst = 0.0;
    for (size_t flat : probe) {
        auto [w, g] = locate(flat);
        const double saved = *w;
        *w = saved + epsilon;
        const double lp = l1_loss(model.forward(sample.input), sample.target);
        *w = saved - epsilon;
        const double lm = l1_loss(model.forward(sample.input), sample.target);
        *w = saved;
        const double g_fd = (lp - lm) / (2.0 * epsilon);
        const double denom = std::max({std::fabs(g), std::fabs(g_fd), 1e-8});
        worst = std::max(worst, std::fabs(g - g_fd) / denom);
    }
    return worst;
}

}  // namespace geonas::nn
