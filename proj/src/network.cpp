#include "geonas/network.hpp"

#include "geonas/rng.hpp"

namespace geonas::nn {

std::vector<double> Network::forward(const std::vector<double>& input) {
    Tensor1D t(in_ch_, in_len_, input);
    for (auto& l : layers_) t = l->forward(t);
    if (t.length != 1)
        throw DimensionError("network output is not a flat vector: " + std::to_string(t.channels) +
                             "x" + std::to_string(t.length));
    return t.data;
}

std::vector<double> Network::backward(const std::vector<double>& grad_out) {
    Tensor1D g(static_cast<int>(grad_out.size()), 1, grad_out);
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g.data;
}

void Network::init_weights(uint64_t seed) {
    Rng rng(seed);
    for (auto& l : layers_) l->init_weights(rng);
}

void Network::zero_grads() {
    for (auto& l : layers_) l->zero_grads();
}

std::vector<ParamView> Network::param_blocks() {
    std::vector<ParamView> out;
    for (auto& l : layers_) l->collect_params(out);
    return out;
}

size_t Network::param_count() const {
    size_t n = 0;
    for (const auto& l : layers_) n += l->param_count();
    return n;
}

std::vector<double> Network::save_weights() const {
    std::vector<double> flat;
    flat.reserve(param_count());
    auto blocks = const_cast<Network*>(this)->param_blocks();
    for (const auto& b : blocks) flat.insert(flat.end(), b.weights.begin(), b.weights.end());
    return flat;
}

void Network::load_weights(const std::vector<double>& flat) {
    if (flat.size() != param_count())
        throw DimensionError("weight vector has " + std::to_string(flat.size()) +
                             " entries, network needs " + std::to_string(param_count()));
    size_t off = 0;
    for (auto& b : param_blocks()) {
        std::copy(flat.begin() + off, flat.begin() + off + b.weights.size(), b.weights.begin());
        off += b.weights.size();
    }
}

int Network::output_dim() const {
    if (layers_.empty()) return input_dim();
    // Output dim is defined by the final Dense layer.
    if (auto* d = dynamic_cast<const Dense*>(layers_.back().get())) return d->out_features();
    throw ConfigError("network must end in a dense layer to define an output dimension");
}

std::string Network::describe() const {
    std::string s = id_ + ": in " + std::to_string(in_ch_) + "x" + std::to_string(in_len_);
    for (const auto& l : layers_) s += " -> " + l->describe();
    return s;
}

}  // namespace geonas::nn
