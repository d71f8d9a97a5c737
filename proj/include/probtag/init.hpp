#pragma once

#include <cmath>

#include "probtag/rng.hpp"
#include "probtag/tensor.hpp"

namespace probtag::nn {

enum class InitScheme { glorot_uniform, zeros };

/// Glorot-uniform samples U(-limit, +limit) with limit = sqrt(6/(fan_in+fan_out)),
/// fan_in = rows, fan_out = cols, entries drawn in row-major order. See
/// docs/numerics.md for the cross-implementation contract.
inline Tensor2D init_params(std::size_t rows, std::size_t cols, Rng& rng,
                            InitScheme scheme = InitScheme::glorot_uniform) {
    Tensor2D t(rows, cols);
    if (scheme == InitScheme::zeros) return t;
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (std::size_t i = 0, n = t.size(); i < n; ++i)
        t.data()[i] = rng.uniform(-limit, limit);
    return t;
}

}  // namespace probtag::nn
