// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fedpath/core/error.hpp"

namespace fedpath::img {

// Owned 8-bit RGB raster, row-major, 3 channels interleaved.
struct ImageU8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    ImageU8() = default;

    ImageU8(int w, int h, uint8_t r = 255, uint8_t g = 255, uint8_t b = 255)
        : width(w), height(h) {
        if (w < 1 || h < 1) throw DimensionError("image dims must be >= 1");
        data.resize(static_cast<size_t>(w) * h * 3);
        for (size_t i = 0; i < data.size(); i += 3) {
            data[i] = r;
            data[i + 1] = g;
            data[i + 2] = b;
        }
    }

    size_t n_pixels() const { return static_cast<size_t>(width) * height; }

    uint8_t* px(int x, int y) { return data.data() + (static_cast<size_t>(y) * width + x) * 3; }
    const uint8_t* px(int x, int y) const {
        return data.data() + (static_cast<size_t>(y) * width + x) * 3;
    }
};

inline float luma(uint8_t r, uint8_t g, uint8_t b) {
    return 0.299f * r + 0.587f * g + 0.114f * b;
}

// Rec.601 grayscale as floats.
inline std::vector<float> grayscale(const ImageU8& img) {
    std::vector<float> g(img.n_pixels());
    for (size_t i = 0; i < g.size(); ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        g[i] = luma(p[0], p[1], p[2]);
    }
    return g;
}

inline uint8_t clamp_u8(float v) {
    return static_cast<uint8_t>(std::lround(std::min(255.0f, std::max(0.0f, v))));
}

namespace detail {

// align_corners=false sample position mapping with edge clamping.
inline void bilinear_coords(int out, int in, int i, int& lo, int& hi, float& frac) {
    float pos = (static_cast<float>(i) + 0.5f) * (static_cast<float>(in) / out) - 0.5f;
    float fl = std::floor(pos);
    lo = static_cast<int>(fl);
    frac = pos - fl;
    if (lo < 0) {
        lo = 0;
        frac = 0.0f;
    }
    hi = lo + 1;
    if (hi > in - 1) {
        hi = in - 1;
        if (lo > in - 1) lo = in - 1;
        frac = (lo == hi) ? 0.0f : frac;
    }
}

}  // namespace detail

inline ImageU8 resize_bilinear(const ImageU8& src, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw DimensionError("resize: out dims must be >= 1");
    ImageU8 dst(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        int y0, y1;
        float fy;
        detail::bilinear_coords(out_h, src.height, y, y0, y1, fy);
        for (int x = 0; x < out_w; ++x) {
            int x0, x1;
            float fx;
            detail::bilinear_coords(out_w, src.width, x, x0, x1, fx);
            const uint8_t* p00 = src.px(x0, y0);
            const uint8_t* p10 = src.px(x1, y0);
            const uint8_t* p01 = src.px(x0, y1);
            const uint8_t* p11 = src.px(x1, y1);
            uint8_t* out = dst.px(x, y);
            for (int c = 0; c < 3; ++c) {
                float top = p00[c] + (p10[c] - p00[c]) * fx;
                float bot = p01[c] + (p11[c] - p01[c]) * fx;
                out[c] = clamp_u8(top + (bot - top) * fy);
            }
        }
    }
    return dst;
}

// Float-plane variant used by the perceptual hash (no quantization).
inline std::vector<float> resize_bilinear_gray(const std::vector<float>& src, int in_w,
                                               int in_h, int out_w, int out_h) {
    std::vector<float> dst(static_cast<size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
        int y0, y1;
        float fy;
        detail::bilinear_coords(out_h, in_h, y, y0, y1, fy);
        for (int x = 0; x < out_w; ++x) {
            int x0, x1;
            float fx;
            detail::bilinear_coords(out_w, in_w, x, x0, x1, fx);
            float p00 = src[static_cast<size_t>(y0) * in_w + x0];
            float p10 = src[static_cast<size_t>(y0) * in_w + x1];
            float p01 = src[static_cast<size_t>(y1) * in_w + x0];
            float p11 = src[static_cast<size_t>(y1) * in_w + x1];
            float top = p00 + (p10 - p00) * fx;
            float bot = p01 + (p11 - p01) * fx;
            dst[static_cast<size_t>(y) * out_w + x] = top + (bot - top) * fy;
        }
    }
    return dst;
}

inline ImageU8 crop(const ImageU8& src, int x0, int y0, int w, int h) {
    if (x0 < 0 || y0 < 0 || x0 + w > src.width || y0 + h > src.height) {
        throw DimensionError("crop rectangle out of bounds");
    }
    ImageU8 out(w, h);
    for (int y = 0; y < h; ++y) {
        const uint8_t* srow = src.px(x0, y0 + y);
        uint8_t* drow = out.px(0, y);
        std::copy(srow, srow + static_cast<size_t>(w) * 3, drow);
    }
    return out;
}

}  // namespace fedpath::img
