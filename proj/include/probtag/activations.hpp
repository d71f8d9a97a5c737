#pragma once

#include <algorithm>
#include <cmath>

#include "probtag/tensor.hpp"

namespace probtag::nn {

enum class Activation { relu, sigmoid, tanh };

inline double sigmoid_scalar(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Elementwise activation.
inline Tensor2D activation(Activation kind, const Tensor2D& x) {
    Tensor2D y(x.rows(), x.cols());
    const double* in = x.data();
    double* out = y.data();
    const std::size_t n = x.size();
    switch (kind) {
        case Activation::relu:
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < n; ++i) out[i] = sigmoid_scalar(in[i]);
            break;
        case Activation::tanh:
            for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(in[i]);
            break;
    }
    ensure_finite(y, "activation");
    return y;
}

/// d(activation)/dx evaluated at x.
inline Tensor2D activation_grad(Activation kind, const Tensor2D& x) {
    Tensor2D g(x.rows(), x.cols());
    const double* in = x.data();
    double* out = g.data();
    const std::size_t n = x.size();
    switch (kind) {
        case Activation::relu:
            for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? 1.0 : 0.0;
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < n; ++i) {
                const double s = sigmoid_scalar(in[i]);
                out[i] = s * (1.0 - s);
            }
            break;
        case Activation::tanh:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = std::tanh(in[i]);
                out[i] = 1.0 - t * t;
            }
            break;
    }
    return g;
}

/// Per-row max-shifted softmax; every output row sums to 1.
inline Tensor2D softmax_rows(const Tensor2D& x) {
    Tensor2D y(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double* in = x.row(r);
        double* out = y.row(r);
        double mx = in[0];
        for (std::size_t c = 1; c < x.cols(); ++c) mx = std::max(mx, in[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < x.cols(); ++c) {
            out[c] = std::exp(in[c] - mx);
            sum += out[c];
        }
        for (std::size_t c = 0; c < x.cols(); ++c) out[c] /= sum;
    }
    ensure_finite(y, "softmax");
    return y;
}

struct CrossEntropyResult {
    double loss;
    Tensor2D dlogits;  // (probs - onehot) / batch, the fused softmax+CE gradient
};

/// Mean categorical cross-entropy of softmax outputs against one-hot labels.
/// Probabilities are clamped to [1e-12, 1] before the log.
inline CrossEntropyResult cross_entropy(const Tensor2D& probs, const Tensor2D& onehot) {
    if (!probs.same_shape(onehot))
        throw ShapeMismatch("cross_entropy " + shape_str(probs) + " vs " + shape_str(onehot));
    const std::size_t batch = probs.rows();
    double loss = 0.0;
    Tensor2D dlogits(probs.rows(), probs.cols());
    for (std::size_t r = 0; r < batch; ++r) {
        for (std::size_t c = 0; c < probs.cols(); ++c) {
            const double y = onehot.at(r, c);
            if (y != 0.0) {
                const double p = std::clamp(probs.at(r, c), 1e-12, 1.0);
                loss -= y * std::log(p);
            }
            dlogits.at(r, c) = (probs.at(r, c) - y) / static_cast<double>(batch);
        }
    }
    loss /= static_cast<double>(batch);
    if (!std::isfinite(loss)) throw NumericError("cross_entropy loss is non-finite");
    return {loss, std::move(dlogits)};
}

}  // namespace probtag::nn
