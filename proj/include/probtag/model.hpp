#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "probtag/errors.hpp"
#include "probtag/gru.hpp"
#include "probtag/layers.hpp"
#include "probtag/lstm.hpp"
#include "probtag/rmsprop.hpp"

namespace probtag::nn {

enum class Arch : std::uint8_t { mlp = 0, lstm = 1, gru = 2 };

inline const char* arch_name(Arch a) {
    switch (a) {
        case Arch::mlp: return "mlp";
        case Arch::lstm: return "lstm";
        case Arch::gru: return "gru";
    }
    return "?";
}

inline Arch arch_from_name(const std::string& name) {
    if (name == "mlp") return Arch::mlp;
    if (name == "lstm") return Arch::lstm;
    if (name == "gru") return Arch::gru;
    throw ConfigError("unknown architecture '" + name + "', expected mlp|lstm|gru");
}

enum class Pooling : std::uint8_t { last = 0, mean = 1 };

inline const char* pooling_name(Pooling p) { return p == Pooling::last ? "last" : "mean"; }

inline Pooling pooling_from_name(const std::string& name) {
    if (name == "last") return Pooling::last;
    if (name == "mean") return Pooling::mean;
    throw ConfigError("unknown pooling '" + name + "', expected last|mean");
}

/// Everything needed to rebuild a model's shape. Stored verbatim in the
/// model file so evaluate/predict can reconstruct the graph.
struct ModelConfig {
    Arch arch = Arch::mlp;
    std::size_t vocab_size = 0;   // includes the <pad>/<oov> sentinels
    std::size_t max_len = 951;
    std::size_t emb_dim = 64;     // also the first MLP hidden width
    std::size_t hidden = 32;      // recurrent state / second MLP width
    std::size_t num_classes = 3;
    double dropout_rate = 0.5;    // MLP only; recurrent nets train without dropout
    std::size_t depth = 1;        // stacked recurrent layers
    Pooling pooling = Pooling::last;
    std::uint64_t seed = 0;       // master seed; sub-streams derived via Rng::mix
};

/// Parameter container for all three architectures.
///
///   mlp:  d1 (max_len x emb_dim, relu) -> dropout -> d2 (emb_dim x hidden,
///         relu) -> dropout -> d3 (hidden x classes) -> softmax. Inputs are
///         the padded id sequence scaled by 1/vocab_size.
///   lstm/gru: embedding (vocab x emb_dim, PAD row frozen) -> depth recurrent
///         layers (hidden) -> last or mean pooled state -> fc1 (hidden x
///         hidden, relu) -> fc2 (hidden x classes) -> softmax.
struct ModelGraph {
    ModelConfig config;

    DenseParams d1, d2, d3;        // mlp
    EmbeddingParams emb;           // recurrent
    std::vector<LstmParams> lstm_layers;
    std::vector<GruParams> gru_layers;
    DenseParams fc1, fc2;          // recurrent head

    void zero_grads() {
        d1.zero_grads();
        d2.zero_grads();
        d3.zero_grads();
        emb.zero_grads();
        for (auto& l : lstm_layers) l.zero_grads();
        for (auto& l : gru_layers) l.zero_grads();
        fc1.zero_grads();
        fc2.zero_grads();
    }
};

/// Builds a freshly initialized graph, drawing weights from `rng` in a fixed
/// order (construction order below; draws are row-major inside each tensor).
inline ModelGraph build_model(const ModelConfig& cfg, Rng& rng) {
    if (cfg.vocab_size < 2) throw ConfigError("vocab_size must include the sentinel ids");
    if (cfg.max_len == 0) throw ConfigError("max_len must be positive");
    if (cfg.depth == 0) throw ConfigError("depth must be at least 1");

    ModelGraph m;
    m.config = cfg;
    switch (cfg.arch) {
        case Arch::mlp:
            m.d1 = DenseParams(cfg.max_len, cfg.emb_dim, rng);
            m.d2 = DenseParams(cfg.emb_dim, cfg.hidden, rng);
            m.d3 = DenseParams(cfg.hidden, cfg.num_classes, rng);
            break;
        case Arch::lstm:
            m.emb = EmbeddingParams(cfg.vocab_size, cfg.emb_dim, rng);
            m.lstm_layers.reserve(cfg.depth);
            for (std::size_t l = 0; l < cfg.depth; ++l)
                m.lstm_layers.emplace_back(l == 0 ? cfg.emb_dim : cfg.hidden, cfg.hidden, rng);
            m.fc1 = DenseParams(cfg.hidden, cfg.hidden, rng);
            m.fc2 = DenseParams(cfg.hidden, cfg.num_classes, rng);
            break;
        case Arch::gru:
            m.emb = EmbeddingParams(cfg.vocab_size, cfg.emb_dim, rng);
            m.gru_layers.reserve(cfg.depth);
            for (std::size_t l = 0; l < cfg.depth; ++l)
                m.gru_layers.emplace_back(l == 0 ? cfg.emb_dim : cfg.hidden, cfg.hidden, rng);
            m.fc1 = DenseParams(cfg.hidden, cfg.hidden, rng);
            m.fc2 = DenseParams(cfg.hidden, cfg.num_classes, rng);
            break;
    }
    return m;
}

/// Convenience overload deriving the init stream from the config's master
/// seed (stream 2; stream 1 is the split, stream 3 the training loop).
inline ModelGraph build_model(const ModelConfig& cfg) {
    Rng rng(Rng::mix(cfg.seed, 2));
    return build_model(cfg, rng);
}

/// Visits every (name, parameter, gradient) triple in the canonical order
/// used for optimizer slots and the model file. Graph may be const or not.
template <typename Graph, typename F>
void for_each_param(Graph& m, F&& f) {
    static const char* const lstm_gates = "ifog";
    static const char* const gru_gates = "zrh";
    auto dense = [&](const char* name, auto& d) {
        f(std::string(name) + ".W", d.W, d.dW);
        f(std::string(name) + ".b", d.b, d.db);
    };
    switch (m.config.arch) {
        case Arch::mlp:
            dense("d1", m.d1);
            dense("d2", m.d2);
            dense("d3", m.d3);
            break;
        case Arch::lstm:
            f(std::string("emb.E"), m.emb.E, m.emb.dE);
            for (std::size_t l = 0; l < m.lstm_layers.size(); ++l) {
                auto& cell = m.lstm_layers[l];
                const std::string prefix = "lstm" + std::to_string(l) + ".";
                for (int k = 0; k < 4; ++k) {
                    const std::string gate(1, lstm_gates[k]);
                    f(prefix + "W" + gate, cell.W[k], cell.dW[k]);
                    f(prefix + "U" + gate, cell.U[k], cell.dU[k]);
                    f(prefix + "b" + gate, cell.b[k], cell.db[k]);
                }
            }
            dense("fc1", m.fc1);
            dense("fc2", m.fc2);
            break;
        case Arch::gru:
            f(std::string("emb.E"), m.emb.E, m.emb.dE);
            for (std::size_t l = 0; l < m.gru_layers.size(); ++l) {
                auto& cell = m.gru_layers[l];
                const std::string prefix = "gru" + std::to_string(l) + ".";
                for (int k = 0; k < 3; ++k) {
                    const std::string gate(1, gru_gates[k]);
                    f(prefix + "W" + gate, cell.W[k], cell.dW[k]);
                    f(prefix + "U" + gate, cell.U[k], cell.dU[k]);
                    f(prefix + "b" + gate, cell.b[k], cell.db[k]);
                }
            }
            dense("fc1", m.fc1);
            dense("fc2", m.fc2);
            break;
    }
}

inline std::size_t param_count(const ModelGraph& m) {
    std::size_t n = 0;
    for_each_param(m, [&](const std::string&, const Tensor2D& p, const Tensor2D&) { n += p.size(); });
    return n;
}

// -------------------------------------------------------------- forward ----

using BatchIds = std::vector<std::span<const TokenId>>;

/// Everything the backward pass needs; filled by model_forward.
struct ForwardCache {
    Tensor2D probs;  // B x classes

    // mlp
    Tensor2D x, z1, y1, mask1, z2, y2, mask2;

    // recurrent
    std::vector<std::vector<LstmStepCache>> lstm_steps;  // per layer
    std::vector<std::vector<GruStepCache>> gru_steps;
    Tensor2D feature, zf1, hf1;
};

namespace detail {

inline void check_batch(const BatchIds& ids, std::size_t max_len) {
    if (ids.empty()) throw SizeMismatch("empty batch");
    for (const auto& seq : ids)
        if (seq.size() != max_len)
            throw ShapeMismatch("sequence length " + std::to_string(seq.size()) +
                                ", model expects " + std::to_string(max_len));
}

/// MLP input: one row per example, entry t is ids[t] / vocab_size.
inline Tensor2D scaled_id_input(const BatchIds& ids, std::size_t vocab_size) {
    Tensor2D x(ids.size(), ids[0].size());
    const double inv = 1.0 / static_cast<double>(vocab_size);
    for (std::size_t r = 0; r < ids.size(); ++r) {
        double* row = x.row(r);
        for (std::size_t t = 0; t < ids[r].size(); ++t)
            row[t] = static_cast<double>(ids[r][t]) * inv;
    }
    return x;
}

inline Tensor2D pool_states(const std::vector<Tensor2D>& hs, Pooling pooling) {
    if (pooling == Pooling::last) return hs.back();
    Tensor2D mean(hs.back().rows(), hs.back().cols());
    for (const Tensor2D& h : hs) add_inplace(mean, h);
    return scale(mean, 1.0 / static_cast<double>(hs.size()));
}

}  // namespace detail

/// Runs the network on a batch of padded id sequences. `mode` controls
/// dropout; `rng` is only consumed by dropout (train-mode MLP), so eval
/// passes are RNG-free.
inline ForwardCache model_forward(const ModelGraph& m, const BatchIds& ids, Mode mode, Rng& rng) {
    const ModelConfig& cfg = m.config;
    detail::check_batch(ids, cfg.max_len);
    ForwardCache cache;

    if (cfg.arch == Arch::mlp) {
        cache.x = detail::scaled_id_input(ids, cfg.vocab_size);
        cache.z1 = dense_forward(m.d1, cache.x);
        Tensor2D h1 = activation(Activation::relu, cache.z1);
        DropoutResult r1 = dropout(h1, cfg.dropout_rate, rng, mode);
        cache.y1 = std::move(r1.y);
        cache.mask1 = std::move(r1.mask);

        cache.z2 = dense_forward(m.d2, cache.y1);
        Tensor2D h2 = activation(Activation::relu, cache.z2);
        DropoutResult r2 = dropout(h2, cfg.dropout_rate, rng, mode);
        cache.y2 = std::move(r2.y);
        cache.mask2 = std::move(r2.mask);

        Tensor2D logits = dense_forward(m.d3, cache.y2);
        cache.probs = softmax_rows(logits);
        return cache;
    }

    // recurrent path: gather embeddings per timestep, run the stack
    std::vector<Tensor2D> xs;
    xs.reserve(cfg.max_len);
    for (std::size_t t = 0; t < cfg.max_len; ++t) xs.push_back(embedding_slice(m.emb, ids, t));

    std::vector<Tensor2D> hs;
    if (cfg.arch == Arch::lstm) {
        cache.lstm_steps.resize(cfg.depth);
        for (std::size_t l = 0; l < cfg.depth; ++l) {
            cache.lstm_steps[l] = lstm_forward(m.lstm_layers[l], xs);
            xs.clear();
            xs.reserve(cfg.max_len);
            for (const LstmStepCache& s : cache.lstm_steps[l]) xs.push_back(s.h);
        }
    } else {
        cache.gru_steps.resize(cfg.depth);
        for (std::size_t l = 0; l < cfg.depth; ++l) {
            cache.gru_steps[l] = gru_forward(m.gru_layers[l], xs);
            xs.clear();
            xs.reserve(cfg.max_len);
            for (const GruStepCache& s : cache.gru_steps[l]) xs.push_back(s.h);
        }
    }
    hs = std::move(xs);  // top layer states, one B x hidden tensor per step

    cache.feature = detail::pool_states(hs, cfg.pooling);
    cache.zf1 = dense_forward(m.fc1, cache.feature);
    cache.hf1 = activation(Activation::relu, cache.zf1);
    Tensor2D logits = dense_forward(m.fc2, cache.hf1);
    cache.probs = softmax_rows(logits);
    return cache;
}

// ------------------------------------------------------------- backward ----

/// Accumulates parameter gradients for the batch that produced `cache`.
/// dlogits is the fused softmax + cross-entropy gradient, (probs - onehot)
/// divided by batch size. Call zero_grads() before the first batch.
inline void model_backward(ModelGraph& m, const BatchIds& ids, const ForwardCache& cache,
                           const Tensor2D& dlogits) {
    const ModelConfig& cfg = m.config;

    if (cfg.arch == Arch::mlp) {
        Tensor2D dy2 = dense_backward(m.d3, cache.y2, dlogits);
        Tensor2D dh2 = hadamard(dy2, cache.mask2);
        Tensor2D dz2 = hadamard(dh2, activation_grad(Activation::relu, cache.z2));
        Tensor2D dy1 = dense_backward(m.d2, cache.y1, dz2);
        Tensor2D dh1 = hadamard(dy1, cache.mask1);
        Tensor2D dz1 = hadamard(dh1, activation_grad(Activation::relu, cache.z1));
        dense_backward(m.d1, cache.x, dz1);  // dx is not needed below the input
        return;
    }

    Tensor2D dhf1 = dense_backward(m.fc2, cache.hf1, dlogits);
    Tensor2D dzf1 = hadamard(dhf1, activation_grad(Activation::relu, cache.zf1));
    Tensor2D dfeature = dense_backward(m.fc1, cache.feature, dzf1);

    const std::size_t T = cfg.max_len;
    const std::size_t batch = dfeature.rows();

    // upstream gradient per timestep for the top layer
    std::vector<Tensor2D> dh_seq(T, Tensor2D(batch, cfg.hidden));
    if (cfg.pooling == Pooling::last) {
        dh_seq[T - 1] = dfeature;
    } else {
        const Tensor2D spread = scale(dfeature, 1.0 / static_cast<double>(T));
        for (std::size_t t = 0; t < T; ++t) dh_seq[t] = spread;
    }

    for (std::size_t l = cfg.depth; l-- > 0;) {
        std::vector<Tensor2D> dxs =
            cfg.arch == Arch::lstm
                ? lstm_backward(m.lstm_layers[l], cache.lstm_steps[l], dh_seq)
                : gru_backward(m.gru_layers[l], cache.gru_steps[l], dh_seq);
        if (l == 0) {
            for (std::size_t t = 0; t < T; ++t)
                embedding_slice_backward(m.emb, ids, t, dxs[t]);
        } else {
            dh_seq = std::move(dxs);  // layer l's input was layer l-1's state
        }
    }
}

/// One optimizer step over the canonical parameter order. Slot indices line
/// up with for_each_param, so a fresh optimizer lazily sizes its caches.
inline void apply_gradients(ModelGraph& m, RmsProp& opt) {
    std::size_t slot = 0;
    for_each_param(m, [&](const std::string&, Tensor2D& p, Tensor2D& g) {
        opt.update(slot++, p, g);
    });
}

/// One-hot matrix from label indices.
inline Tensor2D make_onehot(const std::vector<std::size_t>& labels, std::size_t num_classes) {
    Tensor2D y(labels.size(), num_classes);
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] >= num_classes) throw SizeMismatch("label out of range");
        y.at(r, labels[r]) = 1.0;
    }
    return y;
}

}  // namespace probtag::nn
