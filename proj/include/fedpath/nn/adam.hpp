// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "fedpath/core/error.hpp"
#include "fedpath/nn/params.hpp"

namespace fedpath::nn {

struct AdamState {
    ParamVector m;
    ParamVector v;
    int64_t step = 0;
    float lr = 3e-4f;
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps = 1e-8f;
    float weight_decay = 0.0f;

    static AdamState init(const ParamVector& like, float lr, float weight_decay,
                          float beta1 = 0.9f, float beta2 = 0.999f, float eps = 1e-8f) {
        AdamState s;
        s.m = zeros_like(like);
        s.v = zeros_like(like);
        s.lr = lr;
        s.weight_decay = weight_decay;
        s.beta1 = beta1;
        s.beta2 = beta2;
        s.eps = eps;
        return s;
    }
};

// Bias-corrected Adam with decoupled weight decay:
//   w <- w - lr * m_hat / (sqrt(v_hat) + eps) - lr * wd * w
// Throws NumericError on non-finite gradients; the federation layer turns
// that into a ClientFailure for the round.
inline void adam_step(ParamVector& params, const ParamVector& grads, AdamState& state) {
    require_congruent(params, grads);
    require_congruent(params, state.m);
    if (!grads.all_finite()) throw NumericError("adam_step: non-finite gradient");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(static_cast<double>(state.beta1),
                                      static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(static_cast<double>(state.beta2),
                                      static_cast<double>(state.step));
    const float inv_bc1 = static_cast<float>(1.0 / bc1);
    const float inv_bc2 = static_cast<float>(1.0 / bc2);
    const float b1 = state.beta1, b2 = state.beta2;
    const float lr = state.lr, eps = state.eps, wd = state.weight_decay;

    for (size_t s = 0; s < params.segments.size(); ++s) {
        auto& w = params.segments[s].data;
        const auto& g = grads.segments[s].data;
        auto& m = state.m.segments[s].data;
        auto& v = state.v.segments[s].data;
        for (size_t i = 0; i < w.size(); ++i) {
            m[i] = b1 * m[i] + (1.0f - b1) * g[i];
            v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
            const float m_hat = m[i] * inv_bc1;
            const float v_hat = v[i] * inv_bc2;
            w[i] -= lr * (m_hat / (std::sqrt(v_hat) + eps)) + lr * wd * w[i];
        }
    }
}

}  // namespace fedpath::nn
