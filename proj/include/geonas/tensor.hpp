#pragma once

#include <string>
#include <vector>

#include "geonas/errors.hpp"

namespace geonas::nn {

/// Dense rank-2 buffer: `channels` rows of `length` samples, row-major.
/// Flattening order everywhere is channel-major: index = c * length + i.
struct Tensor1D {
    int channels = 0;
    int length = 0;
    std::vector<double> data;

    Tensor1D() = default;

    Tensor1D(int c, int len) : channels(c), length(len) {
        if (c <= 0 || len <= 0)
            throw DimensionError("tensor dims must be positive, got " + std::to_string(c) + "x" +
                                 std::to_string(len));
        data.assign(static_cast<size_t>(c) * static_cast<size_t>(len), 0.0);
    }

    Tensor1D(int c, int len, std::vector<double> values) : Tensor1D(c, len) {
        if (values.size() != data.size())
            throw DimensionError("tensor init size mismatch: expected " +
                                 std::to_string(data.size()) + " values, got " +
                                 std::to_string(values.size()));
        data = std::move(values);
    }

    double& at(int c, int i) { return data[static_cast<size_t>(c) * length + i]; }
    double at(int c, int i) const { return data[static_cast<size_t>(c) * length + i]; }

    size_t size() const { return data.size(); }

    bool same_shape(const Tensor1D& o) const {
        return channels == o.channels && length == o.length;
    }

    Tensor1D& operator+=(const Tensor1D& o) {
        if (!same_shape(o))
            throw DimensionError("tensor add shape mismatch");
        for (size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
};

}  // namespace geonas::nn
