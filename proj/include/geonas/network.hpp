#pragma once

#include <memory>
#include <string>
#include <vector>

#include "geonas/layers.hpp"

namespace geonas::nn {

/// Sequential container of layers operating on flat vectors at the boundary:
/// the input vector is viewed as a (in_channels x in_length) tensor and the
/// final layer must emit a (out_dim x 1) tensor.
class Network {
public:
    Network(int in_channels, int in_length, std::string id)
        : in_ch_(in_channels), in_len_(in_length), id_(std::move(id)) {}

    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

    /// Forward pass over the flat input (length in_channels*in_length),
    /// caching intermediates for a subsequent backward() on the same sample.
    std::vector<double> forward(const std::vector<double>& input);

    /// Reverse pass; accumulates parameter gradients and returns
    /// dLoss/dInput as a flat vector.
    std::vector<double> backward(const std::vector<double>& grad_out);

    void init_weights(uint64_t seed);
    void zero_grads();

    std::vector<ParamView> param_blocks();
    size_t param_count() const;

    /// All weights flattened in declaration order (snapshot/restore).
    std::vector<double> save_weights() const;
    void load_weights(const std::vector<double>& flat);

    int in_channels() const { return in_ch_; }
    int in_length() const { return in_len_; }
    int input_dim() const { return in_ch_ * in_len_; }
    int output_dim() const;
    const std::string& id() const { return id_; }
    std::string describe() const;

private:
    int in_ch_, in_len_;
    std::string id_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace geonas::nn
