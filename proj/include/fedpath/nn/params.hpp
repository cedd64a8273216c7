// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/nn/tensor.hpp"

namespace fedpath::nn {

struct ParamSegment {
    std::string name;
    std::vector<int> shape;
    std::vector<float> data;
};

// Flat, ordered parameter storage. The segment order is canonical (fixed
// by the model definition), so element-wise arithmetic between two
// ParamVectors of the same model is well-defined. This is the unit the
// federation layer aggregates, checkpoints and diffs.
struct ParamVector {
    std::vector<ParamSegment> segments;

    int64_t total_len() const {
        int64_t n = 0;
        for (const auto& s : segments) n += static_cast<int64_t>(s.data.size());
        return n;
    }

    void add_segment(std::string name, std::vector<int> shape) {
        for (const auto& s : segments) {
            if (s.name == name) throw DimensionError("duplicate segment name: " + name);
        }
        ParamSegment seg;
        seg.name = std::move(name);
        int64_t n = TensorF::numel_of(shape);
        seg.shape = std::move(shape);
        seg.data.assign(static_cast<size_t>(n), 0.0f);
        segments.push_back(std::move(seg));
    }

    bool all_finite() const {
        for (const auto& s : segments) {
            for (float v : s.data) {
                if (!std::isfinite(v)) return false;
            }
        }
        return true;
    }
};

inline bool congruent(const ParamVector& a, const ParamVector& b) {
    if (a.segments.size() != b.segments.size()) return false;
    for (size_t i = 0; i < a.segments.size(); ++i) {
        if (a.segments[i].name != b.segments[i].name) return false;
        if (a.segments[i].shape != b.segments[i].shape) return false;
    }
    return true;
}

inline void require_congruent(const ParamVector& a, const ParamVector& b) {
    if (!congruent(a, b)) {
        throw DimensionError("parameter vectors are not congruent");
    }
}

// Returns a ParamVector with the same segment layout, all zeros.
inline ParamVector zeros_like(const ParamVector& p) {
    ParamVector out;
    out.segments.reserve(p.segments.size());
    for (const auto& s : p.segments) {
        ParamSegment z;
        z.name = s.name;
        z.shape = s.shape;
        z.data.assign(s.data.size(), 0.0f);
        out.segments.push_back(std::move(z));
    }
    return out;
}

// Element-wise a*x + y.
inline ParamVector param_axpy(float a, const ParamVector& x, const ParamVector& y) {
    require_congruent(x, y);
    ParamVector out = y;
    for (size_t s = 0; s < out.segments.size(); ++s) {
        const auto& xs = x.segments[s].data;
        auto& os = out.segments[s].data;
        for (size_t i = 0; i < os.size(); ++i) os[i] += a * xs[i];
    }
    return out;
}

// Euclidean distance over all segments, accumulated in f64.
inline double param_l2_dist(const ParamVector& x, const ParamVector& y) {
    require_congruent(x, y);
    double acc = 0.0;
    for (size_t s = 0; s < x.segments.size(); ++s) {
        const auto& xs = x.segments[s].data;
        const auto& ys = y.segments[s].data;
        for (size_t i = 0; i < xs.size(); ++i) {
            double d = static_cast<double>(xs[i]) - static_cast<double>(ys[i]);
            acc += d * d;
        }
    }
    return std::sqrt(acc);
}

inline bool bitwise_equal(const ParamVector& a, const ParamVector& b) {
    if (!congruent(a, b)) return false;
    for (size_t s = 0; s < a.segments.size(); ++s) {
        const auto& as = a.segments[s].data;
        const auto& bs = b.segments[s].data;
        for (size_t i = 0; i < as.size(); ++i) {
            if (as[i] != bs[i] || std::signbit(as[i]) != std::signbit(bs[i])) return false;
        }
    }
    return true;
}

}  // namespace fedpath::nn
