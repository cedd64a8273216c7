// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/imaging/image.hpp"
#include "fedpath/imaging/otsu.hpp"
#include "fedpath/imaging/types.hpp"

namespace fedpath::img {

// One manifest row: identity, grid position, quality scores and label of a
// kept patch.
struct PatchRecord {
    std::string source_id;
    int grid_x = 0;
    int grid_y = 0;
    Magnification magnification = Magnification::x10;
    double tissue_fraction = 0.0;
    double focus_score = 0.0;
    uint64_t dhash = 0;
    Grade label = Grade::I;
};

struct ExtractedPatch {
    PatchRecord record;  // grid_x/grid_y/tissue_fraction filled here
    ImageU8 image;
};

// Regular-grid tiling in row-major order (grid_x fastest). Patches whose
// tissue fraction is below min_tissue are discarded.
inline std::vector<ExtractedPatch> extract_patches(const ImageU8& image, int patch_size,
                                                   int stride, double min_tissue) {
    if (patch_size < 1 || stride < 1) {
        throw DimensionError("extract_patches: patch_size and stride must be >= 1");
    }
    if (patch_size > image.width || patch_size > image.height) {
        throw DimensionError("extract_patches: patch larger than image");
    }
    const int nx = (image.width - patch_size) / stride + 1;
    const int ny = (image.height - patch_size) / stride + 1;
    std::vector<ExtractedPatch> out;
    for (int gy = 0; gy < ny; ++gy) {
        for (int gx = 0; gx < nx; ++gx) {
            ImageU8 patch = crop(image, gx * stride, gy * stride, patch_size, patch_size);
            TissueMask tm = tissue_mask(patch);
            if (tm.fraction < min_tissue) continue;
            ExtractedPatch ep;
            ep.record.grid_x = gx;
            ep.record.grid_y = gy;
            ep.record.tissue_fraction = tm.fraction;
            ep.image = std::move(patch);
            out.push_back(std::move(ep));
        }
    }
    return out;
}

}  // namespace fedpath::img
