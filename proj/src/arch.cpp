#include "geonas/arch.hpp"

#include <algorithm>

#include "geonas/errors.hpp"

namespace geonas::arch {

SearchSpace::SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ConfigError("search space needs at least one dimension");
    cardinality_ = 1;
    for (const auto& d : dims_) {
        if (d.grid.empty()) throw ConfigError("dimension '" + d.name + "' has an empty grid");
        if (!std::is_sorted(d.grid.begin(), d.grid.end()) ||
            std::adjacent_find(d.grid.begin(), d.grid.end()) != d.grid.end())
            throw ConfigError("dimension '" + d.name + "' grid must be strictly ascending");
        cardinality_ *= d.grid.size();
    }
}

std::vector<HyperparamSet> SearchSpace::enumerate() const {
    std::vector<HyperparamSet> out;
    out.reserve(cardinality_);
    for (size_t i = 0; i < cardinality_; ++i) out.push_back(at_index(i));
    return out;
}

HyperparamSet SearchSpace::at_index(size_t i) const {
    if (i >= cardinality_) throw RangeError("index", "point index out of range");
    HyperparamSet h(dims_.size());
    for (size_t d = dims_.size(); d-- > 0;) {
        const auto& grid = dims_[d].grid;
        h[d] = grid[i % grid.size()];
        i /= grid.size();
    }
    return h;
}

bool SearchSpace::contains(const HyperparamSet& h) const {
    if (h.size() != dims_.size()) return false;
    for (size_t d = 0; d < dims_.size(); ++d) {
        const auto& grid = dims_[d].grid;
        if (!std::binary_search(grid.begin(), grid.end(), h[d])) return false;
    }
    return true;
}

std::vector<double> SearchSpace::encode(const HyperparamSet& h) const {
    if (h.size() != dims_.size()) throw DimensionError("point/space dimension mismatch");
    std::vector<double> x(dims_.size());
    for (size_t d = 0; d < dims_.size(); ++d) {
        const auto& grid = dims_[d].grid;
        const double lo = grid.front(), hi = grid.back();
        x[d] = (hi > lo) ? (h[d] - lo) / (hi - lo) : 0.0;
    }
    return x;
}

std::string SearchSpace::format(const HyperparamSet& h) const {
    if (h.size() != dims_.size()) throw DimensionError("point/space dimension mismatch");
    std::string s = "{";
    for (size_t d = 0; d < dims_.size(); ++d) {
        if (d) s += ",";
        s += "\"" + dims_[d].name + "\":" + std::to_string(h[d]);
    }
    s += "}";
    return s;
}

SearchSpace SearchSpace::forward_space() {
    return SearchSpace({{"n", {1, 2, 3, 4}}, {"k0", {3, 5, 7}}, {"k1", {3, 5, 7}}, {"l", {3, 5, 7}}});
}

SearchSpace SearchSpace::inverse_space() {
    return SearchSpace({{"n", {1, 2, 3, 4, 5}}, {"k0", {3, 5, 7}}, {"k1", {3, 5, 7}}});
}

namespace {

void check_kernel(int k, const char* name) {
    if (k != 3 && k != 5 && k != 7)
        throw ConfigError(std::string(name) + " must be one of {3,5,7}, got " + std::to_string(k));
}

}  // namespace

ForwardHyperparams ForwardHyperparams::from_point(const HyperparamSet& h) {
    if (h.size() != 4) throw ConfigError("forward hyperparameters need 4 values (n,k0,k1,l)");
    ForwardHyperparams f{h[0], h[1], h[2], h[3]};
    if (f.n < 0) throw ConfigError("block count n must be non-negative");
    check_kernel(f.k0, "k0");
    check_kernel(f.k1, "k1");
    if (f.l != 1 && f.l != 3 && f.l != 5 && f.l != 7)
        throw ConfigError("head kernel l must be one of {1,3,5,7}, got " + std::to_string(f.l));
    return f;
}

InverseHyperparams InverseHyperparams::from_point(const HyperparamSet& h) {
    if (h.size() != 3) throw ConfigError("inverse hyperparameters need 3 values (n,k0,k1)");
    InverseHyperparams v{h[0], h[1], h[2]};
    if (v.n < 0) throw ConfigError("block count n must be non-negative");
    check_kernel(v.k0, "k0");
    check_kernel(v.k1, "k1");
    return v;
}

nn::Network build_forward_net(const ForwardHyperparams& raw, int width) {
    const ForwardHyperparams h = ForwardHyperparams::from_point(raw.to_point());
    if (width <= 0) throw ConfigError("width must be positive");
    std::string id = "fwd{n=" + std::to_string(h.n) + ",k0=" + std::to_string(h.k0) +
                     ",k1=" + std::to_string(h.k1) + ",l=" + std::to_string(h.l) +
                     ",w=" + std::to_string(width) + "}";
    nn::Network net(1, kForwardInputLen, std::move(id));
    net.add(std::make_unique<nn::Conv1d>(1, width, h.l));
    net.add(std::make_unique<nn::Relu>());
    for (int b = 0; b <= h.n; ++b)
        net.add(std::make_unique<nn::ResidualBlock>(width, h.k0, h.k1, width));
    net.add(std::make_unique<nn::Conv1d>(width, width, 1));
    net.add(std::make_unique<nn::Relu>());
    net.add(std::make_unique<nn::Dense>(width, kForwardInputLen, kForwardOutputDim));
    return net;
}

nn::Network build_inverse_net(const InverseHyperparams& raw, int width) {
    const InverseHyperparams h = InverseHyperparams::from_point(raw.to_point());
    if (width <= 0) throw ConfigError("width must be positive");
    std::string id = "inv{n=" + std::to_string(h.n) + ",k0=" + std::to_string(h.k0) +
                     ",k1=" + std::to_string(h.k1) + ",w=" + std::to_string(width) + "}";
    nn::Network net(1, kInverseInputLen, std::move(id));
    int in_ch = 1;
    for (int b = 0; b <= h.n; ++b) {
        net.add(std::make_unique<nn::ResidualBlock>(in_ch, h.k0, h.k1, width));
        in_ch = width;
    }
    net.add(std::make_unique<nn::Dense>(width, kInverseInputLen, kInverseOutputDim));
    return net;
}

long long count_params(const ForwardHyperparams& h, int width) {
    return static_cast<long long>(build_forward_net(h, width).param_count());
}

long long count_params(const InverseHyperparams& h, int width) {
    return static_cast<long long>(build_inverse_net(h, width).param_count());
}

}  // namespace geonas::arch
