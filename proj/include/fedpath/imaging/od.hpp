// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/image.hpp"

namespace fedpath::img {

// Optical density of one 8-bit channel value: -log10((p+1)/i0), clamped at 0.
// The +1 keeps the argument positive for p = 0.
inline double od_from_u8(uint8_t p, double i0 = 255.0) {
    double od = -std::log10((static_cast<double>(p) + 1.0) / i0);
    return od < 0.0 ? 0.0 : od;
}

inline uint8_t od_to_u8(double od, double i0 = 255.0) {
    double p = i0 * std::pow(10.0, -od) - 1.0;
    if (p < 0.0) p = 0.0;
    if (p > 255.0) p = 255.0;
    return static_cast<uint8_t>(std::lround(p));
}

// Per-pixel OD triples, flattened row-major: out[i*3 + c].
inline std::vector<double> rgb_to_od(const ImageU8& img, double i0 = 255.0) {
    if (i0 <= 0.0) throw NumericError("rgb_to_od: i0 must be > 0");
    std::vector<double> od(img.n_pixels() * 3);
    for (size_t i = 0; i < od.size(); ++i) {
        od[i] = od_from_u8(img.data[i], i0);
    }
    return od;
}

}  // namespace fedpath::img
