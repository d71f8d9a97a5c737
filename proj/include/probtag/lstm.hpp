#pragma once

#include <array>
#include <vector>

#include "probtag/activations.hpp"
#include "probtag/init.hpp"
#include "probtag/tensor.hpp"

namespace probtag::nn {

/// Gate order used throughout: i (input), f (forget), o (output), g (cell
/// candidate). Gates i,f,o are sigmoid, g is tanh:
///   c_t = f o c_{t-1} + i o g,  h_t = o o tanh(c_t)
struct LstmParams {
    std::array<Tensor2D, 4> W;   // emb_dim x hidden
    std::array<Tensor2D, 4> U;   // hidden x hidden
    std::array<Tensor2D, 4> b;   // 1 x hidden
    std::array<Tensor2D, 4> dW, dU, db;

    LstmParams() = default;
    LstmParams(std::size_t in_dim, std::size_t hidden, Rng& rng) {
        for (int k = 0; k < 4; ++k) {
            W[k] = init_params(in_dim, hidden, rng);
            U[k] = init_params(hidden, hidden, rng);
            b[k] = Tensor2D(1, hidden);
            dW[k] = Tensor2D(in_dim, hidden);
            dU[k] = Tensor2D(hidden, hidden);
            db[k] = Tensor2D(1, hidden);
        }
        // forget-gate bias starts at 1 so early training does not flush the cell
        b[1].fill(1.0);
    }

    std::size_t hidden() const { return b[0].cols(); }
    std::size_t in_dim() const { return W[0].rows(); }

    void zero_grads() {
        for (int k = 0; k < 4; ++k) {
            dW[k].fill(0.0);
            dU[k].fill(0.0);
            db[k].fill(0.0);
        }
    }
};

struct LstmStepCache {
    Tensor2D x;       // B x in_dim
    Tensor2D i, f, o, g;
    Tensor2D c;       // B x hidden (post-step cell)
    Tensor2D h;       // B x hidden
    Tensor2D tanh_c;
};

/// One timestep. h_prev/c_prev are B x hidden (zeros for the first step).
inline LstmStepCache lstm_step(const LstmParams& p, const Tensor2D& x_t,
                               const Tensor2D& h_prev, const Tensor2D& c_prev) {
    std::array<Tensor2D, 4> pre;
    for (int k = 0; k < 4; ++k) {
        pre[k] = matmul(x_t, p.W[k]);
        add_inplace(pre[k], matmul(h_prev, p.U[k]));
        add_row_inplace(pre[k], p.b[k]);
    }
    LstmStepCache s;
    s.x = x_t;
    s.i = activation(Activation::sigmoid, pre[0]);
    s.f = activation(Activation::sigmoid, pre[1]);
    s.o = activation(Activation::sigmoid, pre[2]);
    s.g = activation(Activation::tanh, pre[3]);
    s.c = add(hadamard(s.f, c_prev), hadamard(s.i, s.g));
    s.tanh_c = activation(Activation::tanh, s.c);
    s.h = hadamard(s.o, s.tanh_c);
    return s;
}

/// Forward over a whole sequence of input slices; caches every step for BPTT.
inline std::vector<LstmStepCache> lstm_forward(const LstmParams& p,
                                               const std::vector<Tensor2D>& xs) {
    std::vector<LstmStepCache> caches;
    caches.reserve(xs.size());
    const std::size_t batch = xs.empty() ? 0 : xs.front().rows();
    Tensor2D h(batch, p.hidden()), c(batch, p.hidden());
    for (const Tensor2D& x_t : xs) {
        caches.push_back(lstm_step(p, x_t, h, c));
        h = caches.back().h;
        c = caches.back().c;
    }
    return caches;
}

/// Full backpropagation through time. dh_seq[t] is the upstream gradient
/// w.r.t. h_t (zero tensors where no head reads that step). Accumulates all
/// twelve parameter gradients and returns dx per timestep.
inline std::vector<Tensor2D> lstm_backward(LstmParams& p,
                                           const std::vector<LstmStepCache>& caches,
                                           const std::vector<Tensor2D>& dh_seq) {
    const std::size_t T = caches.size();
    if (dh_seq.size() != T) throw ShapeMismatch("lstm_backward dh_seq length");
    const std::size_t batch = T == 0 ? 0 : caches[0].h.rows();
    const std::size_t H = p.hidden();

    std::vector<Tensor2D> dxs(T);
    const Tensor2D zeros(batch, H);
    Tensor2D dh_next(batch, H), dc_next(batch, H);
    for (std::size_t t = T; t-- > 0;) {
        const LstmStepCache& s = caches[t];
        const Tensor2D& c_prev = t > 0 ? caches[t - 1].c : zeros;
        const Tensor2D& h_prev = t > 0 ? caches[t - 1].h : zeros;

        Tensor2D dh = add(dh_seq[t], dh_next);

        // h = o o tanh(c)
        Tensor2D do_ = hadamard(dh, s.tanh_c);
        Tensor2D dc = dc_next;
        for (std::size_t idx = 0; idx < dc.size(); ++idx) {
            const double tc = s.tanh_c.data()[idx];
            dc.data()[idx] += dh.data()[idx] * s.o.data()[idx] * (1.0 - tc * tc);
        }

        Tensor2D di = hadamard(dc, s.g);
        Tensor2D dg = hadamard(dc, s.i);
        Tensor2D df = hadamard(dc, c_prev);
        dc_next = hadamard(dc, s.f);

        // back through the gate nonlinearities to pre-activations
        std::array<Tensor2D, 4> da{Tensor2D(batch, H), Tensor2D(batch, H),
                                   Tensor2D(batch, H), Tensor2D(batch, H)};
        for (std::size_t idx = 0; idx < di.size(); ++idx) {
            const double iv = s.i.data()[idx], fv = s.f.data()[idx];
            const double ov = s.o.data()[idx], gv = s.g.data()[idx];
            da[0].data()[idx] = di.data()[idx] * iv * (1.0 - iv);
            da[1].data()[idx] = df.data()[idx] * fv * (1.0 - fv);
            da[2].data()[idx] = do_.data()[idx] * ov * (1.0 - ov);
            da[3].data()[idx] = dg.data()[idx] * (1.0 - gv * gv);
        }

        Tensor2D dx(batch, p.in_dim());
        dh_next = Tensor2D(batch, H);
        for (int k = 0; k < 4; ++k) {
            matmul_acc_tA(p.dW[k], s.x, da[k]);
            matmul_acc_tA(p.dU[k], h_prev, da[k]);
            add_inplace(p.db[k], colsum(da[k]));
            add_inplace(dx, matmul_tB(da[k], p.W[k]));
            add_inplace(dh_next, matmul_tB(da[k], p.U[k]));
        }
        dxs[t] = std::move(dx);
    }
    return dxs;
}

}  // namespace probtag::nn
