#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "probtag/activations.hpp"
#include "probtag/init.hpp"
#include "probtag/rng.hpp"
#include "probtag/tensor.hpp"

namespace probtag::nn {

using TokenId = std::uint32_t;

enum class Mode { train, eval };

// ---------------------------------------------------------------- dense ----

struct DenseParams {
    Tensor2D W;   // in x out
    Tensor2D b;   // 1 x out
    Tensor2D dW;
    Tensor2D db;

    DenseParams() = default;
    DenseParams(std::size_t in, std::size_t out, Rng& rng)
        : W(init_params(in, out, rng)),
          b(1, out),
          dW(in, out),
          db(1, out) {}

    void zero_grads() {
        dW.fill(0.0);
        db.fill(0.0);
    }
};

/// y = x W + b with the bias broadcast per row.
inline Tensor2D dense_forward(const DenseParams& p, const Tensor2D& x) {
    Tensor2D y = matmul(x, p.W);
    add_row_inplace(y, p.b);
    ensure_finite(y, "dense");
    return y;
}

/// Accumulates dW = x^T dy, db = colsum(dy); returns dx = dy W^T.
inline Tensor2D dense_backward(DenseParams& p, const Tensor2D& x, const Tensor2D& dy) {
    matmul_acc_tA(p.dW, x, dy);
    add_inplace(p.db, colsum(dy));
    return matmul_tB(dy, p.W);
}

// -------------------------------------------------------------- dropout ----

struct DropoutResult {
    Tensor2D y;
    Tensor2D mask;  // entries are 0 or 1/(1-rate); dx = dy o mask
};

/// Inverted dropout: in train mode each entry is zeroed independently with
/// probability `rate` and survivors are scaled by 1/(1-rate); eval mode is the
/// identity. rate must lie in [0, 1).
inline DropoutResult dropout(const Tensor2D& x, double rate, Rng& rng, Mode mode) {
    if (rate < 0.0 || rate >= 1.0) throw NumericError("dropout rate outside [0,1)");
    DropoutResult r{Tensor2D(x.rows(), x.cols()), Tensor2D(x.rows(), x.cols(), 1.0)};
    if (mode == Mode::eval || rate == 0.0) {
        r.y = x;
        return r;
    }
    const double keep_scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0, n = x.size(); i < n; ++i) {
        const double m = rng.next_double() < rate ? 0.0 : keep_scale;
        r.mask.data()[i] = m;
        r.y.data()[i] = x.data()[i] * m;
    }
    return r;
}

// ------------------------------------------------------------ embedding ----

struct EmbeddingParams {
    Tensor2D E;   // vocab_size x emb_dim; row 0 (PAD) frozen at zero
    Tensor2D dE;

    EmbeddingParams() = default;
    EmbeddingParams(std::size_t vocab_size, std::size_t emb_dim, Rng& rng)
        : E(init_params(vocab_size, emb_dim, rng)), dE(vocab_size, emb_dim) {
        for (std::size_t c = 0; c < emb_dim; ++c) E.at(0, c) = 0.0;
    }

    void zero_grads() { dE.fill(0.0); }
};

/// Row lookup per id; returns the T x emb_dim sequence matrix.
inline Tensor2D embedding_forward(const EmbeddingParams& p, std::span<const TokenId> ids) {
    Tensor2D seq(ids.size(), p.E.cols());
    for (std::size_t t = 0; t < ids.size(); ++t) {
        const double* src = p.E.row(ids[t]);
        double* dst = seq.row(t);
        for (std::size_t c = 0; c < p.E.cols(); ++c) dst[c] = src[c];
    }
    return seq;
}

/// Scatter-adds upstream gradients into dE rows. The PAD row (id 0) never
/// receives an update, which keeps it frozen at zero.
inline void embedding_backward(EmbeddingParams& p, std::span<const TokenId> ids,
                               const Tensor2D& dseq) {
    if (dseq.rows() != ids.size() || dseq.cols() != p.E.cols())
        throw ShapeMismatch("embedding backward " + shape_str(dseq));
    for (std::size_t t = 0; t < ids.size(); ++t) {
        if (ids[t] == 0) continue;
        double* dst = p.dE.row(ids[t]);
        const double* src = dseq.row(t);
        for (std::size_t c = 0; c < p.E.cols(); ++c) dst[c] += src[c];
    }
}

/// Batch variant: gathers embedding rows for timestep t of every sequence in
/// the batch into a B x emb_dim slice.
inline Tensor2D embedding_slice(const EmbeddingParams& p,
                                const std::vector<std::span<const TokenId>>& batch_ids,
                                std::size_t t) {
    Tensor2D x(batch_ids.size(), p.E.cols());
    for (std::size_t r = 0; r < batch_ids.size(); ++r) {
        const double* src = p.E.row(batch_ids[r][t]);
        double* dst = x.row(r);
        for (std::size_t c = 0; c < p.E.cols(); ++c) dst[c] = src[c];
    }
    return x;
}

inline void embedding_slice_backward(EmbeddingParams& p,
                                     const std::vector<std::span<const TokenId>>& batch_ids,
                                     std::size_t t, const Tensor2D& dx) {
    for (std::size_t r = 0; r < batch_ids.size(); ++r) {
        const TokenId id = batch_ids[r][t];
        if (id == 0) continue;
        double* dst = p.dE.row(id);
        const double* src = dx.row(r);
        for (std::size_t c = 0; c < p.E.cols(); ++c) dst[c] += src[c];
    }
}

}  // namespace probtag::nn
