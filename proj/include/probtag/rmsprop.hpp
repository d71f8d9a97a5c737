#pragma once

#include <vector>

#include "probtag/tensor.hpp"

namespace probtag::nn {

/// RMSProp update:
///   cache <- rho * cache + (1 - rho) * g^2
///   p     <- p - lr * g / (sqrt(cache) + eps)
/// Defaults lr=0.001, rho=0.9, eps=1e-7 (documented in docs/numerics.md).
struct RmsProp {
    double lr = 0.001;
    double rho = 0.9;
    double eps = 1e-7;
    std::vector<Tensor2D> caches;  // one accumulator per parameter tensor, aligned by index

    void ensure_cache(std::size_t idx, const Tensor2D& param) {
        if (caches.size() <= idx) caches.resize(idx + 1);
        if (!caches[idx].same_shape(param)) caches[idx] = Tensor2D(param.rows(), param.cols());
    }

    void update(std::size_t idx, Tensor2D& param, const Tensor2D& grad) {
        if (!param.same_shape(grad))
            throw ShapeMismatch("rmsprop param " + shape_str(param) + " vs grad " + shape_str(grad));
        ensure_cache(idx, param);
        Tensor2D& cache = caches[idx];
        for (std::size_t i = 0, n = param.size(); i < n; ++i) {
            const double g = grad.data()[i];
            double& c = cache.data()[i];
            c = rho * c + (1.0 - rho) * g * g;
            param.data()[i] -= lr * g / (std::sqrt(c) + eps);
        }
        ensure_finite(param, "rmsprop update");
    }
};

}  // namespace probtag::nn
