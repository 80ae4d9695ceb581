#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geonas/network.hpp"

namespace geonas::arch {

/// One named search dimension: a finite ascending integer grid.
struct Dimension {
    std::string name;
    std::vector<int> grid;
};

/// A point in a search space: one integer per dimension, in dimension order.
using HyperparamSet = std::vector<int>;

/// Ordered list of named dimensions; points enumerate in lexicographic
/// order (first dimension slowest).
class SearchSpace {
public:
    explicit SearchSpace(std::vector<Dimension> dims);

    size_t cardinality() const { return cardinality_; }
    size_t dim_count() const { return dims_.size(); }
    const std::vector<Dimension>& dims() const { return dims_; }

    /// Full Cartesian product in lexicographic order, no duplicates.
    std::vector<HyperparamSet> enumerate() const;

    /// The i-th point of the enumeration (mixed-radix decode).
    HyperparamSet at_index(size_t i) const;

    bool contains(const HyperparamSet& h) const;

    /// Min-max normalization of each coordinate to [0,1] using the grid
    /// bounds; a single-valued dimension maps to 0.
    std::vector<double> encode(const HyperparamSet& h) const;

    /// Structured-text rendering {"name":value,...} in dimension order.
    std::string format(const HyperparamSet& h) const;

    /// The two canonical spaces searched by the tuner.
    static SearchSpace forward_space();
    static SearchSpace inverse_space();

private:
    std::vector<Dimension> dims_;
    size_t cardinality_ = 0;
};

/// Forward-operator hyperparameters: n residual blocks (indices 0..n, so
/// n+1 blocks are built), body kernels k0/k1, input head kernel l.
struct ForwardHyperparams {
    int n, k0, k1, l;

    static ForwardHyperparams from_point(const HyperparamSet& h);
    HyperparamSet to_point() const { return {n, k0, k1, l}; }
};

/// Inverse-operator hyperparameters: n residual blocks (n+1 built), kernels
/// k0/k1; the first block lifts the single input channel via its skip
/// projection.
struct InverseHyperparams {
    int n, k0, k1;

    static InverseHyperparams from_point(const HyperparamSet& h);
    HyperparamSet to_point() const { return {n, k0, k1}; }
};

/// Reference architecture against which scores are normalized.
struct ReferenceConfig {
    HyperparamSet h;
    double H = 0.0;   // validation loss of the trained reference
    long long Np = 0; // trainable parameter count of the reference
};

inline constexpr int kForwardInputLen = 6;    // 5 formation parameters + dip
inline constexpr int kForwardOutputDim = 13;  // measurement vector
inline constexpr int kInverseInputLen = 14;   // 13 measurements + dip
inline constexpr int kInverseOutputDim = 5;   // formation parameters

/// Head conv C_l (1 -> width) + activation, n+1 residual blocks, pointwise
/// conv + activation, dense map to the 13 outputs.
nn::Network build_forward_net(const ForwardHyperparams& h, int width);

/// n+1 residual blocks (the first lifting 1 -> width), dense map to the 5
/// formation parameters.
nn::Network build_inverse_net(const InverseHyperparams& h, int width);

long long count_params(const ForwardHyperparams& h, int width);
long long count_params(const InverseHyperparams& h, int width);

}  // namespace geonas::arch
