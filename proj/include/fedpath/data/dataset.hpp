// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fedpath/augment/batch.hpp"
#include "fedpath/core/error.hpp"
#include "fedpath/imaging/dual_scale.hpp"
#include "fedpath/imaging/patches.hpp"
#include "fedpath/io/manifest.hpp"
#include "fedpath/io/png.hpp"

namespace fedpath::data {

struct Sample {
    img::PatchRecord record;
    img::ImageU8 image;
};

struct Dataset {
    std::vector<Sample> samples;

    std::vector<int> labels() const {
        std::vector<int> out(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) {
            out[i] = img::label_index(samples[i].record.label);
        }
        return out;
    }
};

// The magnification variants of one source image share a group id so that
// train/val/test splitting never separates them.
inline std::string group_id(const std::string& source_id) {
    auto pos = source_id.rfind('_');
    if (pos != std::string::npos) {
        std::string tail = source_id.substr(pos + 1);
        if (tail == "4x" || tail == "10x" || tail == "20x" || tail == "40x") {
            return source_id.substr(0, pos);
        }
    }
    return source_id;
}

// Loads manifest.jsonl plus the referenced patch PNGs from a directory.
inline Dataset load_dataset(const std::filesystem::path& dir) {
    auto records = io::read_manifest(dir / "manifest.jsonl");
    Dataset ds;
    ds.samples.reserve(records.size());
    for (auto& r : records) {
        Sample s;
        s.image = io::read_png(dir / io::patch_filename(r));
        s.record = std::move(r);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

// Assembles a batch of dual-scale tensors with one-hot label rows.
inline aug::LabeledBatch make_batch(const Dataset& ds, const std::vector<int>& indices) {
    if (indices.empty()) throw DimensionError("make_batch: empty index list");
    const int B = static_cast<int>(indices.size());
    aug::LabeledBatch batch;
    batch.x224 = nn::TensorF({B, 3, img::kFineSize, img::kFineSize});
    batch.x320 = nn::TensorF({B, 3, img::kCoarseSize, img::kCoarseSize});
    batch.y = nn::TensorF({B, 3});
    batch.magnification.resize(static_cast<size_t>(B));
    const int64_t n224 = batch.x224.numel() / B;
    const int64_t n320 = batch.x320.numel() / B;
    for (int b = 0; b < B; ++b) {
        const Sample& s = ds.samples[static_cast<size_t>(indices[static_cast<size_t>(b)])];
        img::DualScale dual = img::make_dual_scale(s.image);
        std::copy(dual.t224.data.begin(), dual.t224.data.end(),
                  batch.x224.data.begin() + static_cast<size_t>(b) * n224);
        std::copy(dual.t320.data.begin(), dual.t320.data.end(),
                  batch.x320.data.begin() + static_cast<size_t>(b) * n320);
        batch.y.at2(b, img::label_index(s.record.label)) = 1.0f;
        batch.magnification[static_cast<size_t>(b)] = s.record.magnification;
    }
    return batch;
}

}  // namespace fedpath::data
