// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/image.hpp"

namespace fedpath::img {

// Variance of the 3x3 Laplacian of the grayscale patch, interior pixels
// only. Low values indicate blur.
inline double laplacian_focus(const ImageU8& patch) {
    if (patch.width < 3 || patch.height < 3) {
        throw DimensionError("laplacian_focus: patch must be at least 3x3");
    }
    std::vector<float> g = grayscale(patch);
    const int w = patch.width, h = patch.height;
    double sum = 0.0, sq = 0.0;
    const int64_t n = static_cast<int64_t>(w - 2) * (h - 2);
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const size_t i = static_cast<size_t>(y) * w + x;
            double lap = static_cast<double>(g[i - w]) + g[i + w] + g[i - 1] + g[i + 1] -
                         4.0 * g[i];
            sum += lap;
            sq += lap * lap;
        }
    }
    double mean = sum / static_cast<double>(n);
    double var = sq / static_cast<double>(n) - mean * mean;
    return var < 0.0 ? 0.0 : var;
}

// Difference hash: grayscale resized to 9x8, bit (y*8+x) set iff the pixel
// right of (x,y) is brighter.
inline uint64_t dhash64(const ImageU8& img) {
    std::vector<float> g = grayscale(img);
    std::vector<float> small = resize_bilinear_gray(g, img.width, img.height, 9, 8);
    uint64_t code = 0;
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            if (small[static_cast<size_t>(y) * 9 + x + 1] > small[static_cast<size_t>(y) * 9 + x]) {
                code |= 1ULL << (y * 8 + x);
            }
        }
    }
    return code;
}

inline int hamming(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

// Mean saturation/hue/value of a patch (HSV, all in [0,1]). Feeds the
// pen-mark heuristic: a patch is flagged when its saturation is extreme for
// the slide and its hue sits in an ink band (green/blue) or it is near-black.
struct HsvStats {
    double sat_mean = 0.0;
    double hue_mean = 0.0;
    double val_mean = 0.0;
};

inline HsvStats hsv_stats(const ImageU8& img) {
    HsvStats st;
    double hx = 0.0, hy = 0.0;  // circular mean of hue
    for (size_t i = 0; i < img.n_pixels(); ++i) {
        const uint8_t* p = img.data.data() + i * 3;
        double r = p[0] / 255.0, g = p[1] / 255.0, b = p[2] / 255.0;
        double mx = std::max({r, g, b});
        double mn = std::min({r, g, b});
        double delta = mx - mn;
        double hue = 0.0;
        if (delta > 1e-12) {
            if (mx == r) {
                hue = (g - b) / delta;
            } else if (mx == g) {
                hue = 2.0 + (b - r) / delta;
            } else {
                hue = 4.0 + (r - g) / delta;
            }
            hue /= 6.0;
            if (hue < 0.0) hue += 1.0;
        }
        double sat = mx > 1e-12 ? delta / mx : 0.0;
        st.sat_mean += sat;
        st.val_mean += mx;
        hx += std::cos(2.0 * 3.14159265358979323846 * hue);
        hy += std::sin(2.0 * 3.14159265358979323846 * hue);
    }
    const double n = static_cast<double>(img.n_pixels());
    st.sat_mean /= n;
    st.val_mean /= n;
    double ang = std::atan2(hy / n, hx / n) / (2.0 * 3.14159265358979323846);
    st.hue_mean = ang < 0.0 ? ang + 1.0 : ang;
    return st;
}

// Ink bands: green [0.30,0.45], blue [0.55,0.70], or near-black. H&E purple
// (~0.75) stays outside both bands.
inline bool is_pen_marked(const HsvStats& st, double slide_sat_q85) {
    bool blackish = st.val_mean < 0.25 && st.sat_mean < 0.2;
    bool ink_hue = (st.hue_mean >= 0.30 && st.hue_mean <= 0.45) ||
                   (st.hue_mean >= 0.55 && st.hue_mean <= 0.70);
    return (st.sat_mean > slide_sat_q85 && ink_hue) || blackish;
}

}  // namespace fedpath::img
