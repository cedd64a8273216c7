// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "fedpath/augment/batch.hpp"
#include "fedpath/augment/beta.hpp"
#include "fedpath/core/rng.hpp"

namespace fedpath::aug {

namespace detail {

// out row i = lam * src row i + (1-lam) * src row j. Partner rows always
// come from the unmixed source batch.
inline void mix_rows(nn::TensorF& out, const nn::TensorF& src, int i, int j, float lam) {
    const int64_t row = src.numel() / src.dim(0);
    float* o = out.data.data() + static_cast<size_t>(i) * row;
    const float* a = src.data.data() + static_cast<size_t>(i) * row;
    const float* b = src.data.data() + static_cast<size_t>(j) * row;
    const float lam1 = 1.0f - lam;
    for (int64_t k = 0; k < row; ++k) o[k] = lam * a[k] + lam1 * b[k];
}

}  // namespace detail

// Deterministic core: sample i is mixed with batch[partner[i]] using
// lambda[i], the same lambda applied to both scales and the label row.
inline LabeledBatch mixup_with_pairs(const LabeledBatch& batch,
                                     const std::vector<int>& partner,
                                     const std::vector<float>& lambda) {
    LabeledBatch out = batch;
    const int B = batch.batch();
    for (int i = 0; i < B; ++i) {
        const int j = partner[static_cast<size_t>(i)];
        const float lam = lambda[static_cast<size_t>(i)];
        if (i == j) continue;
        detail::mix_rows(out.x224, batch.x224, i, j, lam);
        detail::mix_rows(out.x320, batch.x320, i, j, lam);
        detail::mix_rows(out.y, batch.y, i, j, lam);
    }
    return out;
}

// Pairs each sample with a random permutation partner; one Beta(alpha,
// alpha) lambda per pair. Batches with fewer than two samples are returned
// unchanged.
inline LabeledBatch mixup(const LabeledBatch& batch, double alpha, Rng& rng) {
    const int B = batch.batch();
    if (B < 2) return batch;
    std::vector<int> partner(static_cast<size_t>(B));
    std::iota(partner.begin(), partner.end(), 0);
    shuffle(partner, rng);
    std::vector<float> lambda(static_cast<size_t>(B));
    for (int i = 0; i < B; ++i) {
        lambda[static_cast<size_t>(i)] = static_cast<float>(beta_sample(alpha, rng));
    }
    return mixup_with_pairs(batch, partner, lambda);
}

}  // namespace fedpath::aug
