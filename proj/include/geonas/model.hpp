#pragma once

#include <vector>

#include "geonas/network.hpp"

namespace geonas::nn {

/// Trainable function from flat input vectors to flat output vectors.
/// backward() must follow forward() on the same sample and accumulates
/// gradients only into the trainable parameter blocks.
class Model {
public:
    virtual ~Model() = default;
    virtual int input_dim() const = 0;
    virtual int output_dim() const = 0;
    virtual std::vector<double> forward(const std::vector<double>& in) = 0;
    virtual void backward(const std::vector<double>& dloss_dout) = 0;
    virtual void zero_grads() = 0;
    virtual std::vector<ParamView> trainable_params() = 0;
    virtual std::vector<double> save_weights() = 0;
    virtual void load_weights(const std::vector<double>& flat) = 0;
};

/// A single network trained directly against its targets.
class NetworkModel : public Model {
public:
    explicit NetworkModel(Network& net) : net_(net) {}

    int input_dim() const override { return net_.input_dim(); }
    int output_dim() const override { return net_.output_dim(); }
    std::vector<double> forward(const std::vector<double>& in) override {
        return net_.forward(in);
    }
    void backward(const std::vector<double>& g) override { net_.backward(g); }
    void zero_grads() override { net_.zero_grads(); }
    std::vector<ParamView> trainable_params() override { return net_.param_blocks(); }
    std::vector<double> save_weights() override { return net_.save_weights(); }
    void load_weights(const std::vector<double>& flat) override { net_.load_weights(flat); }

private:
    Network& net_;
};

/// Composition used for inverse training: input [m..., t] -> inverse net
/// predicts parameters p, then the frozen forward net re-simulates
/// measurements from [p..., t]. Only the inverse network's parameters are
/// trainable; gradients flow through the frozen forward network, whose
/// weights are never touched.
class ComposedModel : public Model {
public:
    ComposedModel(Network& inverse, Network& frozen_forward);

    int input_dim() const override { return inv_.input_dim(); }
    int output_dim() const override { return fwd_.output_dim(); }
    std::vector<double> forward(const std::vector<double>& in) override;
    void backward(const std::vector<double>& dloss_dout) override;
    void zero_grads() override {
        inv_.zero_grads();
        fwd_.zero_grads();  // keeps the unused frozen-side accumulators bounded
    }
    std::vector<ParamView> trainable_params() override { return inv_.param_blocks(); }
    std::vector<double> save_weights() override { return inv_.save_weights(); }
    void load_weights(const std::vector<double>& flat) override { inv_.load_weights(flat); }

private:
    Network& inv_;
    Network& fwd_;
    double t_ = 0.0;  // dip channel of the current sample, passed through
};

}  // namespace geonas::nn
