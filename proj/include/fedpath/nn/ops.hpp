// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/core/rng.hpp"
#include "fedpath/core/thread_pool.hpp"
#include "fedpath/nn/tensor.hpp"

namespace fedpath::nn {

namespace detail {

// Dot product with four independent accumulator chains. Fixed evaluation
// order keeps results bitwise reproducible for any thread count.
inline float dot4(const float* a, const float* b, int n) {
    float s0 = 0.0f, s1 = 0.0f, s2 = 0.0f, s3 = 0.0f;
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return ((s0 + s1) + (s2 + s3));
}

inline void axpy(float a, const float* x, float* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

// Lowers one sample's input window into a [D x P] matrix, D = C*kh*kw,
// P = OH*OW, rows contiguous in output position.
inline void im2colT(const float* x, int C, int H, int W, int kh, int kw,
                    int stride, int OH, int OW, float* colT) {
    const int P = OH * OW;
    int d = 0;
    for (int c = 0; c < C; ++c) {
        const float* xc = x + static_cast<size_t>(c) * H * W;
        for (int ky = 0; ky < kh; ++ky) {
            for (int kx = 0; kx < kw; ++kx, ++d) {
                float* row = colT + static_cast<size_t>(d) * P;
                for (int oy = 0; oy < OH; ++oy) {
                    const float* src = xc + static_cast<size_t>(oy * stride + ky) * W + kx;
                    float* dst = row + static_cast<size_t>(oy) * OW;
                    if (stride == 1) {
                        for (int ox = 0; ox < OW; ++ox) dst[ox] = src[ox];
                    } else {
                        for (int ox = 0; ox < OW; ++ox) dst[ox] = src[ox * stride];
                    }
                }
            }
        }
    }
}

}  // namespace detail

// ---- dense ----------------------------------------------------------------

// x: [B,I], W: [I,O], b: [O] -> [B,O]; out[b,o] = sum_i x[b,i]*W[i,o] + b[o]
inline TensorF dense_forward(const TensorF& x, const TensorF& W, const TensorF& b) {
    require_shape(x.ndim() == 2 && W.ndim() == 2 && b.ndim() == 1, "dense: bad ranks");
    const int B = x.dim(0), I = x.dim(1), O = W.dim(1);
    require_shape(W.dim(0) == I, "dense: x/W inner dims differ");
    require_shape(b.dim(0) == O, "dense: bias length != out dim");
    TensorF out({B, O});
    for (int bi = 0; bi < B; ++bi) {
        float* orow = out.data.data() + static_cast<size_t>(bi) * O;
        for (int o = 0; o < O; ++o) orow[o] = b.data[static_cast<size_t>(o)];
        const float* xrow = x.data.data() + static_cast<size_t>(bi) * I;
        for (int i = 0; i < I; ++i) {
            detail::axpy(xrow[i], W.data.data() + static_cast<size_t>(i) * O, orow, O);
        }
    }
    return out;
}

struct DenseGrads {
    TensorF grad_x;
    TensorF grad_w;
    TensorF grad_b;
};

inline DenseGrads dense_backward(const TensorF& x, const TensorF& W,
                                 const TensorF& grad_out) {
    require_shape(x.ndim() == 2 && W.ndim() == 2 && grad_out.ndim() == 2,
                  "dense_backward: bad ranks");
    const int B = x.dim(0), I = x.dim(1), O = W.dim(1);
    require_shape(W.dim(0) == I, "dense_backward: x/W inner dims differ");
    require_shape(grad_out.dim(0) == B && grad_out.dim(1) == O,
                  "dense_backward: grad_out shape mismatch");
    DenseGrads g{TensorF({B, I}), TensorF({I, O}), TensorF({O})};
    for (int bi = 0; bi < B; ++bi) {
        const float* xrow = x.data.data() + static_cast<size_t>(bi) * I;
        const float* grow = grad_out.data.data() + static_cast<size_t>(bi) * O;
        for (int i = 0; i < I; ++i) {
            detail::axpy(xrow[i], grow, g.grad_w.data.data() + static_cast<size_t>(i) * O, O);
        }
        detail::axpy(1.0f, grow, g.grad_b.data.data(), O);
        float* gxrow = g.grad_x.data.data() + static_cast<size_t>(bi) * I;
        for (int i = 0; i < I; ++i) {
            gxrow[i] = detail::dot4(grow, W.data.data() + static_cast<size_t>(i) * O, O);
        }
    }
    return g;
}

// ---- conv2d ---------------------------------------------------------------

// x: [B,C,H,W], k: [F,C,kh,kw], b: [F]; valid padding, cross-correlation.
inline TensorF conv2d_forward(const TensorF& x, const TensorF& k, const TensorF& b,
                              int stride, ThreadPool* pool = nullptr) {
    require_shape(x.ndim() == 4 && k.ndim() == 4 && b.ndim() == 1, "conv2d: bad ranks");
    require_shape(stride >= 1, "conv2d: stride must be >= 1");
    const int B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const int F = k.dim(0), kh = k.dim(2), kw = k.dim(3);
    require_shape(k.dim(1) == C, "conv2d: channel mismatch");
    require_shape(b.dim(0) == F, "conv2d: bias length != filter count");
    if (kh > H || kw > W) throw DimensionError("conv2d: kernel larger than input");
    const int OH = (H - kh) / stride + 1;
    const int OW = (W - kw) / stride + 1;
    const int P = OH * OW;
    const int D = C * kh * kw;
    TensorF out({B, F, OH, OW});
    parallel_for(pool, 0, B, [&](int bi) {
        std::vector<float> colT(static_cast<size_t>(D) * P);
        detail::im2colT(x.data.data() + static_cast<size_t>(bi) * C * H * W, C, H, W,
                        kh, kw, stride, OH, OW, colT.data());
        float* ob = out.data.data() + static_cast<size_t>(bi) * F * P;
        for (int f = 0; f < F; ++f) {
            float* of = ob + static_cast<size_t>(f) * P;
            const float bias = b.data[static_cast<size_t>(f)];
            for (int p = 0; p < P; ++p) of[p] = bias;
            const float* kf = k.data.data() + static_cast<size_t>(f) * D;
            for (int d = 0; d < D; ++d) {
                detail::axpy(kf[d], colT.data() + static_cast<size_t>(d) * P, of, P);
            }
        }
    });
    return out;
}

struct ConvGrads {
    TensorF grad_x;
    TensorF grad_k;
    TensorF grad_b;
};

inline ConvGrads conv2d_backward(const TensorF& x, const TensorF& k,
                                 const TensorF& grad_out, int stride,
                                 ThreadPool* pool = nullptr) {
    require_shape(x.ndim() == 4 && k.ndim() == 4 && grad_out.ndim() == 4,
                  "conv2d_backward: bad ranks");
    const int B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const int F = k.dim(0), kh = k.dim(2), kw = k.dim(3);
    require_shape(k.dim(1) == C, "conv2d_backward: channel mismatch");
    const int OH = (H - kh) / stride + 1;
    const int OW = (W - kw) / stride + 1;
    require_shape(grad_out.dim(0) == B && grad_out.dim(1) == F &&
                      grad_out.dim(2) == OH && grad_out.dim(3) == OW,
                  "conv2d_backward: grad_out shape mismatch");
    const int P = OH * OW;
    const int D = C * kh * kw;

    ConvGrads g{TensorF({B, C, H, W}), TensorF({F, C, kh, kw}), TensorF({F})};
    // Per-sample partials for the weight/bias reductions; summed in sample
    // order afterwards so the result is independent of scheduling.
    std::vector<std::vector<float>> gk_part(static_cast<size_t>(B));
    std::vector<std::vector<float>> gb_part(static_cast<size_t>(B));

    parallel_for(pool, 0, B, [&](int bi) {
        std::vector<float> colT(static_cast<size_t>(D) * P);
        detail::im2colT(x.data.data() + static_cast<size_t>(bi) * C * H * W, C, H, W,
                        kh, kw, stride, OH, OW, colT.data());
        const float* gob = grad_out.data.data() + static_cast<size_t>(bi) * F * P;

        auto& gk = gk_part[static_cast<size_t>(bi)];
        auto& gb = gb_part[static_cast<size_t>(bi)];
        gk.assign(static_cast<size_t>(F) * D, 0.0f);
        gb.assign(static_cast<size_t>(F), 0.0f);

        std::vector<float> gcolT(static_cast<size_t>(D) * P, 0.0f);
        for (int f = 0; f < F; ++f) {
            const float* gof = gob + static_cast<size_t>(f) * P;
            const float* kf = k.data.data() + static_cast<size_t>(f) * D;
            float* gkf = gk.data() + static_cast<size_t>(f) * D;
            double bsum = 0.0;
            for (int p = 0; p < P; ++p) bsum += gof[p];
            gb[static_cast<size_t>(f)] = static_cast<float>(bsum);
            for (int d = 0; d < D; ++d) {
                const float* crow = colT.data() + static_cast<size_t>(d) * P;
                gkf[d] = detail::dot4(gof, crow, P);
                detail::axpy(kf[d], gof, gcolT.data() + static_cast<size_t>(d) * P, P);
            }
        }
        // col2im scatter-add back to the input gradient.
        float* gx = g.grad_x.data.data() + static_cast<size_t>(bi) * C * H * W;
        int d = 0;
        for (int c = 0; c < C; ++c) {
            float* gxc = gx + static_cast<size_t>(c) * H * W;
            for (int ky = 0; ky < kh; ++ky) {
                for (int kx = 0; kx < kw; ++kx, ++d) {
                    const float* row = gcolT.data() + static_cast<size_t>(d) * P;
                    for (int oy = 0; oy < OH; ++oy) {
                        float* dst = gxc + static_cast<size_t>(oy * stride + ky) * W + kx;
                        const float* src = row + static_cast<size_t>(oy) * OW;
                        for (int ox = 0; ox < OW; ++ox) dst[ox * stride] += src[ox];
                    }
                }
            }
        }
    });

    for (int bi = 0; bi < B; ++bi) {
        const auto& gk = gk_part[static_cast<size_t>(bi)];
        const auto& gb = gb_part[static_cast<size_t>(bi)];
        for (size_t i = 0; i < gk.size(); ++i) g.grad_k.data[i] += gk[i];
        for (size_t i = 0; i < gb.size(); ++i) g.grad_b.data[i] += gb[i];
    }
    return g;
}

// ---- relu -----------------------------------------------------------------

inline TensorF relu(const TensorF& x) {
    TensorF y = x;
    for (float& v : y.data) {
        if (v < 0.0f) v = 0.0f;
    }
    return y;
}

// Subgradient at 0 is 0.
inline TensorF relu_backward(const TensorF& x, const TensorF& grad_out) {
    require_shape(x.shape == grad_out.shape, "relu_backward: shape mismatch");
    TensorF g = grad_out;
    for (size_t i = 0; i < g.data.size(); ++i) {
        if (x.data[i] <= 0.0f) g.data[i] = 0.0f;
    }
    return g;
}

// ---- dropout --------------------------------------------------------------

struct DropoutResult {
    TensorF y;
    TensorF mask;
};

// Inverted dropout: kept activations are scaled by 1/(1-p) at train time so
// eval needs no rescaling. Eval mode consumes no rng draws.
inline DropoutResult dropout(const TensorF& x, float p, Rng& rng, bool train) {
    if (!(p >= 0.0f && p < 1.0f)) throw NumericError("dropout: p must be in [0,1)");
    DropoutResult r;
    r.mask = TensorF(x.shape);
    if (!train) {
        r.y = x;
        for (float& m : r.mask.data) m = 1.0f;
        return r;
    }
    r.y = TensorF(x.shape);
    const float scale = 1.0f / (1.0f - p);
    for (size_t i = 0; i < x.data.size(); ++i) {
        float keep = (rng.unit() >= p) ? 1.0f : 0.0f;
        r.mask.data[i] = keep;
        r.y.data[i] = x.data[i] * keep * scale;
    }
    return r;
}

inline TensorF dropout_backward(const TensorF& mask, float p, const TensorF& grad_out) {
    require_shape(mask.shape == grad_out.shape, "dropout_backward: shape mismatch");
    TensorF g = grad_out;
    const float scale = 1.0f / (1.0f - p);
    for (size_t i = 0; i < g.data.size(); ++i) g.data[i] *= mask.data[i] * scale;
    return g;
}

// ---- global average pool ----------------------------------------------------

// x: [B,C,H,W] -> [B,C]
inline TensorF global_avg_pool(const TensorF& x) {
    require_shape(x.ndim() == 4, "global_avg_pool: rank must be 4");
    const int B = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
    TensorF out({B, C});
    const float inv = 1.0f / static_cast<float>(HW);
    for (int b = 0; b < B; ++b) {
        for (int c = 0; c < C; ++c) {
            const float* src = x.data.data() + (static_cast<size_t>(b) * C + c) * HW;
            double acc = 0.0;
            for (int i = 0; i < HW; ++i) acc += src[i];
            out.at2(b, c) = static_cast<float>(acc) * inv;
        }
    }
    return out;
}

inline TensorF global_avg_pool_backward(const std::vector<int>& x_shape,
                                        const TensorF& grad_out) {
    require_shape(x_shape.size() == 4 && grad_out.ndim() == 2,
                  "global_avg_pool_backward: bad ranks");
    const int B = x_shape[0], C = x_shape[1], HW = x_shape[2] * x_shape[3];
    require_shape(grad_out.dim(0) == B && grad_out.dim(1) == C,
                  "global_avg_pool_backward: grad shape mismatch");
    TensorF g(x_shape);
    const float inv = 1.0f / static_cast<float>(HW);
    for (int b = 0; b < B; ++b) {
        for (int c = 0; c < C; ++c) {
            const float v = grad_out.at2(b, c) * inv;
            float* dst = g.data.data() + (static_cast<size_t>(b) * C + c) * HW;
            for (int i = 0; i < HW; ++i) dst[i] = v;
        }
    }
    return g;
}

// ---- softmax cross-entropy ---------------------------------------------------

namespace detail {

// Row softmax with max subtraction, in f64. Shared by softmax_rows and
// softmax_xent so (softmax - target) cancels exactly when target == softmax.
inline void softmax_row(const float* logits, int K, double* out) {
    double m = logits[0];
    for (int k = 1; k < K; ++k) m = std::max(m, static_cast<double>(logits[k]));
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        out[k] = std::exp(static_cast<double>(logits[k]) - m);
        sum += out[k];
    }
    for (int k = 0; k < K; ++k) out[k] /= sum;
}

}  // namespace detail

inline TensorF softmax_rows(const TensorF& logits) {
    require_shape(logits.ndim() == 2, "softmax: rank must be 2");
    const int B = logits.dim(0), K = logits.dim(1);
    TensorF out({B, K});
    std::vector<double> row(static_cast<size_t>(K));
    for (int b = 0; b < B; ++b) {
        detail::softmax_row(logits.data.data() + static_cast<size_t>(b) * K, K, row.data());
        for (int k = 0; k < K; ++k) out.at2(b, k) = static_cast<float>(row[static_cast<size_t>(k)]);
    }
    return out;
}

struct XentResult {
    double loss;
    TensorF grad_logits;
};

// Mean cross-entropy against soft target rows; grad = (softmax - t)/B.
inline XentResult softmax_xent(const TensorF& logits, const TensorF& targets) {
    require_shape(logits.ndim() == 2 && targets.ndim() == 2, "softmax_xent: rank must be 2");
    require_shape(logits.shape == targets.shape, "softmax_xent: shape mismatch");
    const int B = logits.dim(0), K = logits.dim(1);
    for (int b = 0; b < B; ++b) {
        double sum = 0.0;
        for (int k = 0; k < K; ++k) {
            float t = targets.at2(b, k);
            if (t < 0.0f) throw NumericError("softmax_xent: negative target entry");
            sum += t;
        }
        if (std::abs(sum - 1.0) > 1e-5) {
            throw NumericError("softmax_xent: target row does not sum to 1");
        }
    }
    XentResult r{0.0, TensorF({B, K})};
    std::vector<double> p(static_cast<size_t>(K));
    double loss_acc = 0.0;
    const float invB = 1.0f / static_cast<float>(B);
    for (int b = 0; b < B; ++b) {
        const float* lrow = logits.data.data() + static_cast<size_t>(b) * K;
        double m = lrow[0];
        for (int k = 1; k < K; ++k) m = std::max(m, static_cast<double>(lrow[k]));
        double sum = 0.0;
        for (int k = 0; k < K; ++k) sum += std::exp(static_cast<double>(lrow[k]) - m);
        const double logsum = std::log(sum);
        detail::softmax_row(lrow, K, p.data());
        for (int k = 0; k < K; ++k) {
            const float t = targets.at2(b, k);
            if (t > 0.0f) {
                loss_acc -= static_cast<double>(t) * ((static_cast<double>(lrow[k]) - m) - logsum);
            }
            r.grad_logits.at2(b, k) =
                (static_cast<float>(p[static_cast<size_t>(k)]) - t) * invB;
        }
    }
    r.loss = loss_acc / static_cast<double>(B);
    return r;
}

}  // namespace fedpath::nn
