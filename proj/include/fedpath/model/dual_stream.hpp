// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fedpath/augment/batch.hpp"
#include "fedpath/core/error.hpp"
#include "fedpath/core/rng.hpp"
#include "fedpath/core/thread_pool.hpp"
#include "fedpath/nn/ops.hpp"
#include "fedpath/nn/params.hpp"
#include "fedpath/nn/tensor.hpp"

namespace fedpath::model {

struct ModelConfig {
    std::string backbone = "tiny";
    float dropout = 0.3f;
    int fine_size = 224;
    int coarse_size = 320;
    int n_classes = 3;
};

// "tiny" backbone: per stream, three 3x3 stride-2 conv+ReLU blocks with
// widths 8/16/32, then global average pooling. The pooled coarse and fine
// features are concatenated (coarse first) and fed to a
// dense(64->32)-ReLU-dropout-dense(32->3) head.
struct TinyDims {
    static constexpr int kWidths[3] = {8, 16, 32};
    static constexpr int kKernel = 3;
    static constexpr int kStride = 2;
    static constexpr int kFeature = 32;  // per-stream feature dim after pooling
    static constexpr int kHidden = 32;
};

// Parameter segments live in the ParamVector in canonical order: coarse
// stream, fine stream, head. Layer code addresses them by index.
struct DualStreamModel {
    ModelConfig config;
    nn::ParamVector params;
};

namespace detail {

inline nn::TensorF segment_tensor(const nn::ParamSegment& s) {
    return nn::TensorF(s.shape, s.data);
}

inline void he_uniform_fill(std::vector<float>& data, int fan_in, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (float& v : data) v = static_cast<float>(rng.uniform(-limit, limit));
}

inline void add_stream_segments(nn::ParamVector& p, const std::string& prefix) {
    int in_c = 3;
    for (int l = 0; l < 3; ++l) {
        const int out_c = TinyDims::kWidths[l];
        p.add_segment(prefix + ".conv" + std::to_string(l) + ".w",
                      {out_c, in_c, TinyDims::kKernel, TinyDims::kKernel});
        p.add_segment(prefix + ".conv" + std::to_string(l) + ".b", {out_c});
        in_c = out_c;
    }
}

}  // namespace detail

inline DualStreamModel build_model(const ModelConfig& config, uint64_t seed) {
    if (config.backbone != "tiny") {
        throw ConfigError("unknown backbone: " + config.backbone);
    }
    DualStreamModel m;
    m.config = config;
    detail::add_stream_segments(m.params, "coarse");
    detail::add_stream_segments(m.params, "fine");
    const int fused = 2 * TinyDims::kFeature;
    m.params.add_segment("head.fc0.w", {fused, TinyDims::kHidden});
    m.params.add_segment("head.fc0.b", {TinyDims::kHidden});
    m.params.add_segment("head.fc1.w", {TinyDims::kHidden, config.n_classes});
    m.params.add_segment("head.fc1.b", {config.n_classes});

    Rng rng(seed);
    for (auto& seg : m.params.segments) {
        if (seg.name.ends_with(".b")) continue;  // biases stay zero
        int fan_in;
        if (seg.shape.size() == 4) {
            fan_in = seg.shape[1] * seg.shape[2] * seg.shape[3];
        } else {
            fan_in = seg.shape[0];
        }
        detail::he_uniform_fill(seg.data, fan_in, rng);
    }
    return m;
}

// Intermediates retained by forward for the exact backward pass.
struct StreamCache {
    std::vector<nn::TensorF> inputs;   // x0 (batch input), x1, x2, x3 = pool input
    std::vector<nn::TensorF> preacts;  // conv outputs before ReLU
};

struct ForwardCache {
    StreamCache coarse;
    StreamCache fine;
    nn::TensorF fused;        // [B, 2*kFeature], coarse features first
    nn::TensorF head_preact;  // fc0 output before ReLU
    nn::TensorF head_dropped; // fc1 input
    nn::TensorF drop_mask;
    bool train = false;
    int batch = 0;
};

namespace detail {

inline nn::TensorF run_stream_forward(const DualStreamModel& m, int seg_base,
                                      const nn::TensorF& input, StreamCache& cache,
                                      ThreadPool* pool) {
    cache.inputs.clear();
    cache.preacts.clear();
    cache.inputs.push_back(input);
    nn::TensorF x = input;
    for (int l = 0; l < 3; ++l) {
        const auto& w = m.params.segments[static_cast<size_t>(seg_base + 2 * l)];
        const auto& b = m.params.segments[static_cast<size_t>(seg_base + 2 * l + 1)];
        nn::TensorF z = nn::conv2d_forward(x, segment_tensor(w), segment_tensor(b),
                                           TinyDims::kStride, pool);
        cache.preacts.push_back(z);
        x = nn::relu(z);
        cache.inputs.push_back(x);
    }
    return nn::global_avg_pool(x);
}

// Adjoint of run_stream_forward; accumulates weight grads into `grads`.
inline void run_stream_backward(const DualStreamModel& m, int seg_base,
                                const StreamCache& cache, const nn::TensorF& grad_feat,
                                nn::ParamVector& grads, ThreadPool* pool) {
    nn::TensorF g = nn::global_avg_pool_backward(cache.inputs[3].shape, grad_feat);
    for (int l = 2; l >= 0; --l) {
        g = nn::relu_backward(cache.preacts[static_cast<size_t>(l)], g);
        const auto& w = m.params.segments[static_cast<size_t>(seg_base + 2 * l)];
        nn::ConvGrads cg = nn::conv2d_backward(cache.inputs[static_cast<size_t>(l)],
                                               segment_tensor(w), g, TinyDims::kStride, pool);
        grads.segments[static_cast<size_t>(seg_base + 2 * l)].data = std::move(cg.grad_k.data);
        grads.segments[static_cast<size_t>(seg_base + 2 * l + 1)].data = std::move(cg.grad_b.data);
        g = std::move(cg.grad_x);
    }
}

constexpr int kCoarseBase = 0;
constexpr int kFineBase = 6;
constexpr int kHeadBase = 12;

}  // namespace detail

// Coarse stream consumes the 320px tensor, fine stream the 224px tensor;
// features are concatenated coarse-first. Train mode applies dropout in
// the head and draws its mask from `rng`; eval mode is rng-independent.
inline nn::TensorF forward(const DualStreamModel& m, const aug::LabeledBatch& batch,
                           bool train, Rng& rng, ForwardCache& cache,
                           ThreadPool* pool = nullptr) {
    nn::require_shape(batch.x320.ndim() == 4 && batch.x320.dim(2) == m.config.coarse_size &&
                          batch.x320.dim(3) == m.config.coarse_size,
                      "forward: coarse input size mismatch");
    nn::require_shape(batch.x224.ndim() == 4 && batch.x224.dim(2) == m.config.fine_size &&
                          batch.x224.dim(3) == m.config.fine_size,
                      "forward: fine input size mismatch");
    nn::require_shape(batch.x224.dim(0) == batch.x320.dim(0),
                      "forward: batch size mismatch between scales");
    cache.train = train;
    cache.batch = batch.x320.dim(0);

    nn::TensorF f_c = detail::run_stream_forward(m, detail::kCoarseBase, batch.x320,
                                                 cache.coarse, pool);
    nn::TensorF f_f = detail::run_stream_forward(m, detail::kFineBase, batch.x224,
                                                 cache.fine, pool);

    const int B = cache.batch;
    const int D = TinyDims::kFeature;
    cache.fused = nn::TensorF({B, 2 * D});
    for (int b = 0; b < B; ++b) {
        for (int d = 0; d < D; ++d) {
            cache.fused.at2(b, d) = f_c.at2(b, d);
            cache.fused.at2(b, D + d) = f_f.at2(b, d);
        }
    }

    const auto& w0 = m.params.segments[detail::kHeadBase];
    const auto& b0 = m.params.segments[detail::kHeadBase + 1];
    const auto& w1 = m.params.segments[detail::kHeadBase + 2];
    const auto& b1 = m.params.segments[detail::kHeadBase + 3];

    cache.head_preact = nn::dense_forward(cache.fused, detail::segment_tensor(w0),
                                          detail::segment_tensor(b0));
    nn::TensorF h = nn::relu(cache.head_preact);
    nn::DropoutResult dr = nn::dropout(h, m.config.dropout, rng, train);
    cache.head_dropped = std::move(dr.y);
    cache.drop_mask = std::move(dr.mask);
    return nn::dense_forward(cache.head_dropped, detail::segment_tensor(w1),
                             detail::segment_tensor(b1));
}

inline nn::ParamVector backward(const DualStreamModel& m, const ForwardCache& cache,
                                const nn::TensorF& grad_logits, ThreadPool* pool = nullptr) {
    nn::require_shape(cache.batch > 0, "backward: stale or empty cache");
    nn::require_shape(grad_logits.ndim() == 2 && grad_logits.dim(0) == cache.batch,
                      "backward: grad_logits shape mismatch");
    nn::ParamVector grads = nn::zeros_like(m.params);

    const auto& w0 = m.params.segments[detail::kHeadBase];
    const auto& w1 = m.params.segments[detail::kHeadBase + 2];

    nn::DenseGrads g1 = nn::dense_backward(cache.head_dropped,
                                           detail::segment_tensor(w1), grad_logits);
    grads.segments[detail::kHeadBase + 2].data = std::move(g1.grad_w.data);
    grads.segments[detail::kHeadBase + 3].data = std::move(g1.grad_b.data);

    nn::TensorF grad_h = cache.train
                             ? nn::dropout_backward(cache.drop_mask, m.config.dropout, g1.grad_x)
                             : std::move(g1.grad_x);
    nn::TensorF grad_z0 = nn::relu_backward(cache.head_preact, grad_h);
    nn::DenseGrads g0 = nn::dense_backward(cache.fused, detail::segment_tensor(w0), grad_z0);
    grads.segments[detail::kHeadBase].data = std::move(g0.grad_w.data);
    grads.segments[detail::kHeadBase + 1].data = std::move(g0.grad_b.data);

    // Concatenation adjoint: the first kFeature columns belong to the
    // coarse stream, the rest to the fine stream.
    const int B = cache.batch;
    const int D = TinyDims::kFeature;
    nn::TensorF grad_fc({B, D}), grad_ff({B, D});
    for (int b = 0; b < B; ++b) {
        for (int d = 0; d < D; ++d) {
            grad_fc.at2(b, d) = g0.grad_x.at2(b, d);
            grad_ff.at2(b, d) = g0.grad_x.at2(b, D + d);
        }
    }
    detail::run_stream_backward(m, detail::kCoarseBase, cache.coarse, grad_fc, grads, pool);
    detail::run_stream_backward(m, detail::kFineBase, cache.fine, grad_ff, grads, pool);
    return grads;
}

// Analytic parameter count for the tiny backbone; build_model must agree.
inline int64_t tiny_param_count(int n_classes = 3) {
    int64_t per_stream = 0;
    int in_c = 3;
    for (int l = 0; l < 3; ++l) {
        const int out_c = TinyDims::kWidths[l];
        per_stream += static_cast<int64_t>(out_c) * in_c * 9 + out_c;
        in_c = out_c;
    }
    const int fused = 2 * TinyDims::kFeature;
    int64_t head = static_cast<int64_t>(fused) * TinyDims::kHidden + TinyDims::kHidden +
                   static_cast<int64_t>(TinyDims::kHidden) * n_classes + n_classes;
    return 2 * per_stream + head;
}

}  // namespace fedpath::model
