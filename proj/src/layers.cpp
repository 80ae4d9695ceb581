#include "geonas/layers.hpp"

#include <cmath>

namespace geonas::nn {

namespace {

/// Fan-in-scaled uniform weights, zero biases. The parameter vector holds
/// weight_count weights followed by the biases; zero biases keep small-width
/// first layers from starting dead on the all-positive scaled inputs.
void fill_uniform(std::vector<double>& w, size_t weight_count, int fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (size_t i = 0; i < w.size(); ++i)
        w[i] = i < weight_count ? rng.uniform(-bound, bound) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- Conv1d

Conv1d::Conv1d(int in_channels, int out_channels, int kernel_size)
    : in_ch_(in_channels), out_ch_(out_channels), k_(kernel_size), pad_((kernel_size - 1) / 2) {
    if (in_channels <= 0 || out_channels <= 0)
        throw ConfigError("conv channels must be positive");
    if (kernel_size <= 0 || kernel_size % 2 == 0)
        throw ConfigError("conv kernel size must be odd and positive, got " +
                          std::to_string(kernel_size));
    const size_t n = static_cast<size_t>(out_ch_) * in_ch_ * k_ + out_ch_;
    w_.assign(n, 0.0);
    g_.assign(n, 0.0);
}

Tensor1D Conv1d::forward(const Tensor1D& x) {
    if (x.channels != in_ch_)
        throw DimensionError("conv expected " + std::to_string(in_ch_) + " input channels, got " +
                             std::to_string(x.channels));
    x_ = x;
    Tensor1D y(out_ch_, x.length);
    for (int oc = 0; oc < out_ch_; ++oc) {
        for (int i = 0; i < x.length; ++i) {
            double acc = bias(oc);
            for (int ic = 0; ic < in_ch_; ++ic) {
                for (int t = 0; t < k_; ++t) {
                    const int j = i + t - pad_;
                    if (j < 0 || j >= x.length) continue;
                    acc += kernel(oc, ic, t) * x.at(ic, j);
                }
            }
            y.at(oc, i) = acc;
        }
    }
    return y;
}

Tensor1D Conv1d::backward(const Tensor1D& grad_out) {
    if (grad_out.channels != out_ch_ || grad_out.length != x_.length)
        throw DimensionError("conv backward shape mismatch");
    Tensor1D gx(in_ch_, x_.length);
    for (int oc = 0; oc < out_ch_; ++oc) {
        for (int i = 0; i < x_.length; ++i) {
            const double go = grad_out.at(oc, i);
            g_[bias_index(oc)] += go;
            for (int ic = 0; ic < in_ch_; ++ic) {
                for (int t = 0; t < k_; ++t) {
                    const int j = i + t - pad_;
                    if (j < 0 || j >= x_.length) continue;
                    g_[kernel_index(oc, ic, t)] += go * x_.at(ic, j);
                    gx.at(ic, j) += go * kernel(oc, ic, t);
                }
            }
        }
    }
    return gx;
}

void Conv1d::init_weights(Rng& rng) {
    fill_uniform(w_, static_cast<size_t>(out_ch_) * in_ch_ * k_, in_ch_ * k_, rng);
}

void Conv1d::zero_grads() { g_.assign(g_.size(), 0.0); }

void Conv1d::collect_params(std::vector<ParamView>& out) {
    out.push_back({std::span<double>(w_), std::span<double>(g_)});
}

std::string Conv1d::describe() const {
    return "conv" + std::to_string(k_) + "(" + std::to_string(in_ch_) + "->" +
           std::to_string(out_ch_) + ")";
}

// ------------------------------------------------------------------ Relu

Tensor1D Relu::forward(const Tensor1D& x) {
    x_ = x;
    Tensor1D y = x;
    for (double& v : y.data)
        if (v < 0.0) v = 0.0;
    return y;
}

Tensor1D Relu::backward(const Tensor1D& grad_out) {
    if (!grad_out.same_shape(x_)) throw DimensionError("relu backward shape mismatch");
    Tensor1D gx = grad_out;
    for (size_t i = 0; i < gx.data.size(); ++i)
        if (x_.data[i] <= 0.0) gx.data[i] = 0.0;
    return gx;
}

// ----------------------------------------------------------------- Dense

Dense::Dense(int in_channels, int in_length, int out_features)
    : in_ch_(in_channels),
      in_len_(in_length),
      in_f_(in_channels * in_length),
      out_f_(out_features) {
    if (in_channels <= 0 || in_length <= 0 || out_features <= 0)
        throw ConfigError("dense dims must be positive");
    const size_t n = static_cast<size_t>(out_f_) * in_f_ + out_f_;
    w_.assign(n, 0.0);
    g_.assign(n, 0.0);
}

Tensor1D Dense::forward(const Tensor1D& x) {
    if (x.channels != in_ch_ || x.length != in_len_)
        throw DimensionError("dense expected " + std::to_string(in_ch_) + "x" +
                             std::to_string(in_len_) + " input, got " +
                             std::to_string(x.channels) + "x" + std::to_string(x.length));
    x_ = x;
    Tensor1D y(out_f_, 1);
    for (int o = 0; o < out_f_; ++o) {
        double acc = w_[static_cast<size_t>(out_f_) * in_f_ + o];
        const size_t row = static_cast<size_t>(o) * in_f_;
        for (int i = 0; i < in_f_; ++i) acc += w_[row + i] * x.data[i];
        y.at(o, 0) = acc;
    }
    return y;
}

Tensor1D Dense::backward(const Tensor1D& grad_out) {
    if (grad_out.channels != out_f_ || grad_out.length != 1)
        throw DimensionError("dense backward shape mismatch");
    Tensor1D gx(in_ch_, in_len_);
    for (int o = 0; o < out_f_; ++o) {
        const double go = grad_out.at(o, 0);
        g_[static_cast<size_t>(out_f_) * in_f_ + o] += go;
        const size_t row = static_cast<size_t>(o) * in_f_;
        for (int i = 0; i < in_f_; ++i) {
            g_[row + i] += go * x_.data[i];
            gx.data[i] += go * w_[row + i];
        }
    }
    return gx;
}

void Dense::init_weights(Rng& rng) {
    fill_uniform(w_, static_cast<size_t>(out_f_) * in_f_, in_f_, rng);
}

void Dense::zero_grads() { g_.assign(g_.size(), 0.0); }

void Dense::collect_params(std::vector<ParamView>& out) {
    out.push_back({std::span<double>(w_), std::span<double>(g_)});
}

std::string Dense::describe() const {
    return "dense(" + std::to_string(in_f_) + "->" + std::to_string(out_f_) + ")";
}

// --------------------------------------------------------- ResidualBlock

ResidualBlock::ResidualBlock(int in_channels, int k0, int k1, int width)
    : in_ch_(in_channels),
      width_(width),
      c0_(in_channels, width, k0),
      c1_(width, width, k1),
      c2_(width, width, 1) {
    if (width <= 0) throw ConfigError("block width must be positive");
    if (in_channels != width) proj_.emplace(in_channels, width, 1);
}

Tensor1D ResidualBlock::forward(const Tensor1D& x) {
    Tensor1D y = a0_.forward(c0_.forward(x));
    y = a1_.forward(c1_.forward(y));
    y = a2_.forward(c2_.forward(y));
    if (proj_)
        y += proj_->forward(x);
    else
        y += x;
    return y;
}

Tensor1D ResidualBlock::backward(const Tensor1D& grad_out) {
    Tensor1D g = a2_.backward(grad_out);
    g = c2_.backward(g);
    g = a1_.backward(g);
    g = c1_.backward(g);
    g = a0_.backward(g);
    Tensor1D gx = c0_.backward(g);
    if (proj_)
        gx += proj_->backward(grad_out);
    else
        gx += grad_out;
    return gx;
}

void ResidualBlock::init_weights(Rng& rng) {
    c0_.init_weights(rng);
    c1_.init_weights(rng);
    c2_.init_weights(rng);
    if (proj_) proj_->init_weights(rng);
}

void ResidualBlock::zero_grads() {
    c0_.zero_grads();
    c1_.zero_grads();
    c2_.zero_grads();
    if (proj_) proj_->zero_grads();
}

void ResidualBlock::collect_params(std::vector<ParamView>& out) {
    c0_.collect_params(out);
    c1_.collect_params(out);
    c2_.collect_params(out);
    if (proj_) proj_->collect_params(out);
}

size_t ResidualBlock::param_count() const {
    return c0_.param_count() + c1_.param_count() + c2_.param_count() +
           (proj_ ? proj_->param_count() : 0);
}

std::string ResidualBlock::describe() const {
    std::string s = "block[" + c0_.describe() + "," + c1_.describe() + "," + c2_.describe();
    if (proj_) s += ",proj";
    s += "]";
    return s;
}

}  // namespace geonas::nn
