// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "fedpath/imaging/image.hpp"
#include "fedpath/nn/tensor.hpp"

namespace fedpath::img {

// Fixed standardization constants for the dual-scale tensors.
constexpr std::array<float, 3> kChannelMean = {0.485f, 0.456f, 0.406f};
constexpr std::array<float, 3> kChannelStd = {0.229f, 0.224f, 0.225f};

constexpr int kFineSize = 224;
constexpr int kCoarseSize = 320;

struct DualScale {
    nn::TensorF t224;  // [3,224,224]
    nn::TensorF t320;  // [3,320,320]
};

// Resizes to CHW float planes, scales to [0,1], standardizes per channel.
inline nn::TensorF to_standardized_tensor(const ImageU8& img, int size) {
    const ImageU8* src = &img;
    ImageU8 resized;
    if (img.width != size || img.height != size) {
        resized = resize_bilinear(img, size, size);
        src = &resized;
    }
    nn::TensorF t({3, size, size});
    for (int c = 0; c < 3; ++c) {
        const float mean = kChannelMean[static_cast<size_t>(c)];
        const float inv_std = 1.0f / kChannelStd[static_cast<size_t>(c)];
        float* plane = t.data.data() + static_cast<size_t>(c) * size * size;
        for (int i = 0; i < size * size; ++i) {
            plane[i] = (src->data[static_cast<size_t>(i) * 3 + c] / 255.0f - mean) * inv_std;
        }
    }
    return t;
}

inline DualScale make_dual_scale(const ImageU8& patch) {
    return {to_standardized_tensor(patch, kFineSize),
            to_standardized_tensor(patch, kCoarseSize)};
}

}  // namespace fedpath::img
