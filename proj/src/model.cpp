#include "geonas/model.hpp"

namespace geonas::nn {

ComposedModel::ComposedModel(Network& inverse, Network& frozen_forward)
    : inv_(inverse), fwd_(frozen_forward) {
    if (inv_.output_dim() + 1 != fwd_.input_dim())
        throw DimensionError("inverse output (+dip) does not match forward input: " +
                             std::to_string(inv_.output_dim()) + "+1 vs " +
                             std::to_string(fwd_.input_dim()));
}

std::vector<double> ComposedModel::forward(const std::vector<double>& in) {
    if (static_cast<int>(in.size()) != inv_.input_dim())
        throw DimensionError("composed input length mismatch");
    t_ = in.back();
    std::vector<double> p = inv_.forward(in);
    p.push_back(t_);
    return fwd_.forward(p);
}

void ComposedModel::backward(const std::vector<double>& dloss_dout) {
    // The forward net accumulates gradients into its own buffers here; they
    // are never read or applied, so the frozen weights stay bit-identical.
    std::vector<double> gp = fwd_.backward(dloss_dout);
    gp.pop_back();  // gradient w.r.t. the pass-through dip channel is unused
    inv_.backward(gp);
}

}  // namespace geonas::nn
