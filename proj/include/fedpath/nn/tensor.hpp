// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fedpath/core/error.hpp"

namespace fedpath::nn {

// Dense row-major f32 tensor. Training math is f32 throughout; loss and
// distance reductions accumulate in f64.
struct TensorF {
    std::vector<int> shape;
    std::vector<float> data;

    TensorF() = default;

    explicit TensorF(std::vector<int> s) : shape(std::move(s)) {
        data.assign(static_cast<size_t>(numel_of(shape)), 0.0f);
    }

    TensorF(std::vector<int> s, std::vector<float> d)
        : shape(std::move(s)), data(std::move(d)) {
        if (static_cast<int64_t>(data.size()) != numel_of(shape)) {
            throw DimensionError("tensor data length does not match shape");
        }
    }

    static int64_t numel_of(const std::vector<int>& s) {
        int64_t n = 1;
        for (int d : s) {
            if (d < 1) throw DimensionError("tensor dimension must be >= 1");
            n *= d;
        }
        return n;
    }

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int ndim() const { return static_cast<int>(shape.size()); }
    int dim(int i) const { return shape[static_cast<size_t>(i)]; }

    float& at2(int i, int j) { return data[static_cast<size_t>(i) * dim(1) + j]; }
    float at2(int i, int j) const { return data[static_cast<size_t>(i) * dim(1) + j]; }

    float& at4(int b, int c, int y, int x) {
        return data[((static_cast<size_t>(b) * dim(1) + c) * dim(2) + y) * dim(3) + x];
    }
    float at4(int b, int c, int y, int x) const {
        return data[((static_cast<size_t>(b) * dim(1) + c) * dim(2) + y) * dim(3) + x];
    }

    bool all_finite() const {
        for (float v : data) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

inline void require_shape(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

}  // namespace fedpath::nn
