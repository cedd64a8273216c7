// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "fedpath/core/error.hpp"
#include "fedpath/core/rng.hpp"
#include "fedpath/imaging/types.hpp"

namespace fedpath::aug {

namespace detail {

// Weighted sampling with replacement, weight 1/count(class(sample)).
// Cumulative weights + binary search keep draws O(log n).
inline std::vector<int> weighted_indices(const std::vector<int>& labels,
                                         const std::vector<int64_t>& counts,
                                         int n_draws, Rng& rng) {
    std::vector<double> cumulative(labels.size());
    double acc = 0.0;
    for (size_t i = 0; i < labels.size(); ++i) {
        acc += 1.0 / static_cast<double>(counts[static_cast<size_t>(labels[i])]);
        cumulative[i] = acc;
    }
    std::vector<int> out(static_cast<size_t>(n_draws));
    for (int d = 0; d < n_draws; ++d) {
        double u = rng.unit() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        size_t idx = static_cast<size_t>(it - cumulative.begin());
        if (idx >= labels.size()) idx = labels.size() - 1;
        out[static_cast<size_t>(d)] = static_cast<int>(idx);
    }
    return out;
}

}  // namespace detail

// Class-balanced sampling with replacement over all three grades; the
// expected per-class draw share is exactly 1/3. A missing class violates
// the contract and is reported by name.
inline std::vector<int> class_balanced_indices(const std::vector<int>& labels,
                                               int n_draws, Rng& rng) {
    std::vector<int64_t> counts(img::kNumGrades, 0);
    for (int l : labels) {
        if (l < 0 || l >= img::kNumGrades) throw ConfigError("label out of range");
        counts[static_cast<size_t>(l)]++;
    }
    for (int c = 0; c < img::kNumGrades; ++c) {
        if (counts[static_cast<size_t>(c)] == 0) {
            throw ConfigError(std::string("class_balanced_indices: empty class ") +
                              img::to_string(img::grade_from_index(c)));
        }
    }
    return detail::weighted_indices(labels, counts, n_draws, rng);
}

// Shard variant used inside local training: balances across the classes
// actually present, so strongly non-IID shards missing a grade can still
// train instead of failing every round.
inline std::vector<int> balanced_indices_present(const std::vector<int>& labels,
                                                 int n_draws, Rng& rng) {
    std::vector<int64_t> counts(img::kNumGrades, 0);
    for (int l : labels) counts[static_cast<size_t>(l)]++;
    if (labels.empty()) throw ConfigError("balanced sampling over empty shard");
    return detail::weighted_indices(labels, counts, n_draws, rng);
}

}  // namespace fedpath::aug
