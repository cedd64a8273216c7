// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fedpath/imaging/types.hpp"
#include "fedpath/nn/tensor.hpp"

namespace fedpath::aug {

// One training mini-batch: both input scales, soft label rows and the
// per-sample magnification tag.
struct LabeledBatch {
    nn::TensorF x224;  // [B,3,224,224]
    nn::TensorF x320;  // [B,3,320,320]
    nn::TensorF y;     // [B,3] probability rows
    std::vector<img::Magnification> magnification;

    int batch() const { return y.ndim() == 2 ? y.dim(0) : 0; }
};

}  // namespace fedpath::aug
