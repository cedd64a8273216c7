// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

#include "fedpath/core/rng.hpp"
#include "fedpath/imaging/image.hpp"

namespace fedpath::img {

struct JitterRanges {
    float brightness = 0.2f;
    float contrast = 0.2f;
    float saturation = 0.2f;
    float hue = 0.05f;  // turns
};

namespace detail {

inline void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v) {
    float mx = std::max({r, g, b});
    float mn = std::min({r, g, b});
    float delta = mx - mn;
    v = mx;
    s = mx > 0.0f ? delta / mx : 0.0f;
    if (delta <= 0.0f) {
        h = 0.0f;
        return;
    }
    if (mx == r) {
        h = (g - b) / delta;
    } else if (mx == g) {
        h = 2.0f + (b - r) / delta;
    } else {
        h = 4.0f + (r - g) / delta;
    }
    h /= 6.0f;
    if (h < 0.0f) h += 1.0f;
}

inline void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b) {
    if (s <= 0.0f) {
        r = g = b = v;
        return;
    }
    h = h - std::floor(h);
    float hh = h * 6.0f;
    int i = static_cast<int>(hh) % 6;
    float f = hh - std::floor(hh);
    float p = v * (1.0f - s);
    float q = v * (1.0f - s * f);
    float t = v * (1.0f - s * (1.0f - f));
    switch (i) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
}

}  // namespace detail

// Brightness -> contrast -> saturation -> hue, each with a factor drawn
// uniformly from its range. Factors are drawn in that fixed order even for
// zero ranges, so the rng stream layout never depends on the config; a
// stage whose factor is exactly the identity is skipped, making zero
// ranges a bitwise no-op.
inline ImageU8 color_jitter(const ImageU8& img, Rng& rng,
                            const JitterRanges& ranges = JitterRanges{}) {
    const float fb = static_cast<float>(rng.uniform(1.0 - ranges.brightness, 1.0 + ranges.brightness));
    const float fc = static_cast<float>(rng.uniform(1.0 - ranges.contrast, 1.0 + ranges.contrast));
    const float fs = static_cast<float>(rng.uniform(1.0 - ranges.saturation, 1.0 + ranges.saturation));
    const float dh = static_cast<float>(rng.uniform(-ranges.hue, ranges.hue));

    ImageU8 out = img;
    if (fb != 1.0f) {
        for (auto& v : out.data) v = clamp_u8(static_cast<float>(v) * fb);
    }
    if (fc != 1.0f) {
        double mean = 0.0;
        for (size_t i = 0; i < out.n_pixels(); ++i) {
            const uint8_t* p = out.data.data() + i * 3;
            mean += luma(p[0], p[1], p[2]);
        }
        const float m = static_cast<float>(mean / static_cast<double>(out.n_pixels()));
        for (auto& v : out.data) v = clamp_u8(m + fc * (static_cast<float>(v) - m));
    }
    if (fs != 1.0f) {
        for (size_t i = 0; i < out.n_pixels(); ++i) {
            uint8_t* p = out.data.data() + i * 3;
            const float gray = luma(p[0], p[1], p[2]);
            for (int c = 0; c < 3; ++c) {
                p[c] = clamp_u8(gray + fs * (static_cast<float>(p[c]) - gray));
            }
        }
    }
    if (dh != 0.0f) {
        for (size_t i = 0; i < out.n_pixels(); ++i) {
            uint8_t* p = out.data.data() + i * 3;
            float h, s, v, r, g, b;
            detail::rgb_to_hsv(p[0] / 255.0f, p[1] / 255.0f, p[2] / 255.0f, h, s, v);
            detail::hsv_to_rgb(h + dh, s, v, r, g, b);
            p[0] = clamp_u8(r * 255.0f);
            p[1] = clamp_u8(g * 255.0f);
            p[2] = clamp_u8(b * 255.0f);
        }
    }
    return out;
}

}  // namespace fedpath::img
