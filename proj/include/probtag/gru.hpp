#pragma once

#include <array>
#include <vector>

#include "probtag/activations.hpp"
#include "probtag/init.hpp"
#include "probtag/tensor.hpp"

namespace probtag::nn {

/// Gate order: z (update), r (reset), h (candidate). z and r are sigmoid,
/// the candidate is tanh:
///   hcand = tanh(x W_h + (r o h_prev) U_h + b_h)
///   h_t   = (1 - z) o h_prev + z o hcand
struct GruParams {
    std::array<Tensor2D, 3> W;   // in_dim x hidden
    std::array<Tensor2D, 3> U;   // hidden x hidden
    std::array<Tensor2D, 3> b;   // 1 x hidden
    std::array<Tensor2D, 3> dW, dU, db;

    GruParams() = default;
    GruParams(std::size_t in_dim, std::size_t hidden, Rng& rng) {
        for (int k = 0; k < 3; ++k) {
            W[k] = init_params(in_dim, hidden, rng);
            U[k] = init_params(hidden, hidden, rng);
            b[k] = Tensor2D(1, hidden);
            dW[k] = Tensor2D(in_dim, hidden);
            dU[k] = Tensor2D(hidden, hidden);
            db[k] = Tensor2D(1, hidden);
        }
    }

    std::size_t hidden() const { return b[0].cols(); }
    std::size_t in_dim() const { return W[0].rows(); }

    void zero_grads() {
        for (int k = 0; k < 3; ++k) {
            dW[k].fill(0.0);
            dU[k].fill(0.0);
            db[k].fill(0.0);
        }
    }
};

struct GruStepCache {
    Tensor2D x;
    Tensor2D z, r, hcand;
    Tensor2D rh;      // r o h_prev, reused in backward
    Tensor2D h;
};

inline GruStepCache gru_step(const GruParams& p, const Tensor2D& x_t, const Tensor2D& h_prev) {
    GruStepCache s;
    s.x = x_t;

    Tensor2D pre_z = matmul(x_t, p.W[0]);
    add_inplace(pre_z, matmul(h_prev, p.U[0]));
    add_row_inplace(pre_z, p.b[0]);
    s.z = activation(Activation::sigmoid, pre_z);

    Tensor2D pre_r = matmul(x_t, p.W[1]);
    add_inplace(pre_r, matmul(h_prev, p.U[1]));
    add_row_inplace(pre_r, p.b[1]);
    s.r = activation(Activation::sigmoid, pre_r);

    s.rh = hadamard(s.r, h_prev);
    Tensor2D pre_h = matmul(x_t, p.W[2]);
    add_inplace(pre_h, matmul(s.rh, p.U[2]));
    add_row_inplace(pre_h, p.b[2]);
    s.hcand = activation(Activation::tanh, pre_h);

    s.h = Tensor2D(h_prev.rows(), h_prev.cols());
    for (std::size_t i = 0; i < s.h.size(); ++i) {
        const double zv = s.z.data()[i];
        s.h.data()[i] = (1.0 - zv) * h_prev.data()[i] + zv * s.hcand.data()[i];
    }
    return s;
}

inline std::vector<GruStepCache> gru_forward(const GruParams& p, const std::vector<Tensor2D>& xs) {
    std::vector<GruStepCache> caches;
    caches.reserve(xs.size());
    const std::size_t batch = xs.empty() ? 0 : xs.front().rows();
    Tensor2D h(batch, p.hidden());
    for (const Tensor2D& x_t : xs) {
        caches.push_back(gru_step(p, x_t, h));
        h = caches.back().h;
    }
    return caches;
}

/// Full BPTT; same contract shape as lstm_backward.
inline std::vector<Tensor2D> gru_backward(GruParams& p, const std::vector<GruStepCache>& caches,
                                          const std::vector<Tensor2D>& dh_seq) {
    const std::size_t T = caches.size();
    if (dh_seq.size() != T) throw ShapeMismatch("gru_backward dh_seq length");
    const std::size_t batch = T == 0 ? 0 : caches[0].h.rows();
    const std::size_t H = p.hidden();

    std::vector<Tensor2D> dxs(T);
    const Tensor2D zeros(batch, H);
    Tensor2D dh_next(batch, H);
    for (std::size_t t = T; t-- > 0;) {
        const GruStepCache& s = caches[t];
        const Tensor2D& h_prev = t > 0 ? caches[t - 1].h : zeros;

        Tensor2D dh = add(dh_seq[t], dh_next);

        Tensor2D dhcand(batch, H), dz(batch, H), dh_prev(batch, H);
        for (std::size_t i = 0; i < dh.size(); ++i) {
            const double zv = s.z.data()[i];
            dhcand.data()[i] = dh.data()[i] * zv;
            dz.data()[i] = dh.data()[i] * (s.hcand.data()[i] - h_prev.data()[i]);
            dh_prev.data()[i] = dh.data()[i] * (1.0 - zv);
        }

        Tensor2D da_h(batch, H);
        for (std::size_t i = 0; i < da_h.size(); ++i) {
            const double hc = s.hcand.data()[i];
            da_h.data()[i] = dhcand.data()[i] * (1.0 - hc * hc);
        }
        Tensor2D drh = matmul_tB(da_h, p.U[2]);
        Tensor2D dr(batch, H);
        for (std::size_t i = 0; i < dr.size(); ++i) {
            dr.data()[i] = drh.data()[i] * h_prev.data()[i];
            dh_prev.data()[i] += drh.data()[i] * s.r.data()[i];
        }

        Tensor2D da_z(batch, H), da_r(batch, H);
        for (std::size_t i = 0; i < da_z.size(); ++i) {
            const double zv = s.z.data()[i], rv = s.r.data()[i];
            da_z.data()[i] = dz.data()[i] * zv * (1.0 - zv);
            da_r.data()[i] = dr.data()[i] * rv * (1.0 - rv);
        }

        matmul_acc_tA(p.dW[0], s.x, da_z);
        matmul_acc_tA(p.dW[1], s.x, da_r);
        matmul_acc_tA(p.dW[2], s.x, da_h);
        matmul_acc_tA(p.dU[0], h_prev, da_z);
        matmul_acc_tA(p.dU[1], h_prev, da_r);
        matmul_acc_tA(p.dU[2], s.rh, da_h);
        add_inplace(p.db[0], colsum(da_z));
        add_inplace(p.db[1], colsum(da_r));
        add_inplace(p.db[2], colsum(da_h));

        Tensor2D dx = matmul_tB(da_z, p.W[0]);
        add_inplace(dx, matmul_tB(da_r, p.W[1]));
        add_inplace(dx, matmul_tB(da_h, p.W[2]));

        add_inplace(dh_prev, matmul_tB(da_z, p.U[0]));
        add_inplace(dh_prev, matmul_tB(da_r, p.U[1]));
        dh_next = std::move(dh_prev);
        dxs[t] = std::move(dx);
    }
    return dxs;
}

}  // namespace probtag::nn
