#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geonas/rng.hpp"
#include "geonas/tensor.hpp"

namespace geonas::nn {

/// Contiguous view of one layer's trainable parameters and the matching
/// gradient accumulator. Blocks are reported in declaration order.
struct ParamView {
    std::span<double> weights;
    std::span<double> grads;
};

class Layer {
public:
    virtual ~Layer() = default;

    /// Compute the layer output, caching whatever backward() will need.
    virtual Tensor1D forward(const Tensor1D& x) = 0;

    /// Given dLoss/dOutput, accumulate parameter gradients and return
    /// dLoss/dInput. Must follow a forward() call on the same sample.
    virtual Tensor1D backward(const Tensor1D& grad_out) = 0;

    virtual void init_weights(Rng&) {}
    virtual void zero_grads() {}

    /// Append this layer's parameter blocks (recursing into sub-layers).
    virtual void collect_params(std::vector<ParamView>&) {}

    virtual size_t param_count() const { return 0; }
    virtual std::string describe() const = 0;
};

/// 1-D convolution with zero ("same") padding: output length equals input
/// length, pad = (kernel_size - 1) / 2 on each side. Kernel size must be odd.
class Conv1d : public Layer {
public:
    Conv1d(int in_channels, int out_channels, int kernel_size);

    Tensor1D forward(const Tensor1D& x) override;
    Tensor1D backward(const Tensor1D& grad_out) override;
    void init_weights(Rng& rng) override;
    void zero_grads() override;
    void collect_params(std::vector<ParamView>& out) override;
    size_t param_count() const override { return w_.size(); }
    std::string describe() const override;

    int in_channels() const { return in_ch_; }
    int out_channels() const { return out_ch_; }
    int kernel_size() const { return k_; }

private:
    int in_ch_, out_ch_, k_, pad_;
    // Layout: kernels [out][in][k] followed by biases [out].
    std::vector<double> w_;
    std::vector<double> g_;
    Tensor1D x_;

    double kernel(int oc, int ic, int t) const {
        return w_[(static_cast<size_t>(oc) * in_ch_ + ic) * k_ + t];
    }
    double bias(int oc) const { return w_[static_cast<size_t>(out_ch_) * in_ch_ * k_ + oc]; }
    size_t kernel_index(int oc, int ic, int t) const {
        return (static_cast<size_t>(oc) * in_ch_ + ic) * k_ + t;
    }
    size_t bias_index(int oc) const { return static_cast<size_t>(out_ch_) * in_ch_ * k_ + oc; }
};

/// Elementwise max(0, x). The derivative at x <= 0 is taken as 0.
class Relu : public Layer {
public:
    Tensor1D forward(const Tensor1D& x) override;
    Tensor1D backward(const Tensor1D& grad_out) override;
    std::string describe() const override { return "relu"; }

private:
    Tensor1D x_;
};

/// Fully connected map from a flattened (channels x length) tensor to a
/// vector of out_features, reported as a (out_features x 1) tensor.
class Dense : public Layer {
public:
    Dense(int in_channels, int in_length, int out_features);

    Tensor1D forward(const Tensor1D& x) override;
    Tensor1D backward(const Tensor1D& grad_out) override;
    void init_weights(Rng& rng) override;
    void zero_grads() override;
    void collect_params(std::vector<ParamView>& out) override;
    size_t param_count() const override { return w_.size(); }
    std::string describe() const override;

    int out_features() const { return out_f_; }

private:
    int in_ch_, in_len_, in_f_, out_f_;
    // Layout: weight matrix [out][in] followed by biases [out].
    std::vector<double> w_;
    std::vector<double> g_;
    Tensor1D x_;
};

/// Residual unit: conv(k0) -> relu -> conv(k1) -> relu -> conv(1) -> relu,
/// summed with a skip path. The skip is the identity when the channel count
/// already matches `width`, otherwise a 1x1 projection convolution.
class ResidualBlock : public Layer {
public:
    ResidualBlock(int in_channels, int k0, int k1, int width);

    Tensor1D forward(const Tensor1D& x) override;
    Tensor1D backward(const Tensor1D& grad_out) override;
    void init_weights(Rng& rng) override;
    void zero_grads() override;
    void collect_params(std::vector<ParamView>& out) override;
    size_t param_count() const override;
    std::string describe() const override;

    bool has_projection() const { return proj_.has_value(); }

private:
    int in_ch_, width_;
    Conv1d c0_, c1_, c2_;
    Relu a0_, a1_, a2_;
    std::optional<Conv1d> proj_;
};

}  // namespace geonas::nn
