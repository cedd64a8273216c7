// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/image.hpp"

namespace fedpath::img {

using Histogram256 = std::array<uint64_t, 256>;

inline Histogram256 gray_histogram(const ImageU8& img) {
    Histogram256 h{};
    for (size_t i = 0; i < img.n_pixels(); ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        h[clamp_u8(luma(p[0], p[1], p[2]))]++;
    }
    return h;
}

// Threshold maximizing the between-class variance w0*w1*(mu0-mu1)^2, where
// class 0 is bins [0..t]. Ties break toward the smallest t.
inline int otsu_threshold(const Histogram256& hist) {
    uint64_t total = 0;
    uint64_t weighted = 0;
    int distinct = 0;
    for (int i = 0; i < 256; ++i) {
        if (hist[i] > 0) ++distinct;
        total += hist[i];
        weighted += static_cast<uint64_t>(i) * hist[i];
    }
    if (distinct < 2) {
        throw EstimationError("otsu: histogram needs at least two distinct values");
    }
    uint64_t w0 = 0;
    uint64_t sum0 = 0;
    double best = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += static_cast<uint64_t>(t) * hist[t];
        if (w0 == 0) continue;
        uint64_t w1 = total - w0;
        if (w1 == 0) break;
        double mu0 = static_cast<double>(sum0) / static_cast<double>(w0);
        double mu1 = static_cast<double>(weighted - sum0) / static_cast<double>(w1);
        double diff = mu0 - mu1;
        double var = static_cast<double>(w0) * static_cast<double>(w1) * diff * diff;
        if (var > best) {
            best = var;
            best_t = t;
        }
    }
    return best_t;
}

struct TissueMask {
    std::vector<uint8_t> mask;  // 1 = tissue
    double fraction = 0.0;
    int threshold = 0;
    bool valid = false;
};

// H&E tissue is darker than the white slide background, so the mask keeps
// gray values at or below the Otsu threshold. A degenerate histogram
// (constant image) yields fraction 0 (all background).
inline TissueMask tissue_mask(const ImageU8& img) {
    TissueMask tm;
    tm.mask.assign(img.n_pixels(), 0);
    Histogram256 hist = gray_histogram(img);
    int t;
    try {
        t = otsu_threshold(hist);
    } catch (const EstimationError&) {
        return tm;
    }
    tm.valid = true;
    tm.threshold = t;
    size_t count = 0;
    for (size_t i = 0; i < img.n_pixels(); ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        if (clamp_u8(luma(p[0], p[1], p[2])) <= t) {
            tm.mask[i] = 1;
            ++count;
        }
    }
    tm.fraction = static_cast<double>(count) / static_cast<double>(img.n_pixels());
    return tm;
}

}  // namespace fedpath::img
