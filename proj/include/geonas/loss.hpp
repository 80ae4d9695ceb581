#pragma once

#include <cmath>
#include <vector>

#include "geonas/errors.hpp"

namespace geonas::nn {

/// L1 loss of one sample: sum of absolute component differences.
inline double l1_loss(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.size() != target.size())
        throw DimensionError("l1_loss length mismatch: " + std::to_string(pred.size()) + " vs " +
                             std::to_string(target.size()));
    double s = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) s += std::fabs(pred[i] - target[i]);
    return s;
}

/// Subgradient of l1_loss with respect to pred: sign of the residual,
/// taken as 0 where the residual is exactly 0.
inline std::vector<double> l1_loss_grad(const std::vector<double>& pred,
                                        const std::vector<double>& target) {
    if (pred.size() != target.size()) throw DimensionError("l1_loss_grad length mismatch");
    std::vector<double> g(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - target[i];
        g[i] = (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    }
    return g;
}

}  // namespace geonas::nn
