// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ltprune/tensor_io.hpp"

namespace ltprune {

/// CLS-to-token similarity values arranged in descending order, together
/// with the permutation back to original token positions. This is the
/// long-tail curve the segmentation stage cuts.
struct SimilarityCurve {
    /// Sorted descending. For curves produced by cls_similarity these are
    /// softmax probabilities summing to 1; the segmentation stage accepts
    /// any finite descending sequence.
    std::vector<double> values;
    /// source_index[i] = original position of values[i]; a permutation of
    /// 0..n-1. Ties keep lower original index first.
    std::vector<std::size_t> source_index;

    std::size_t size() const {
        return values.size();
    }
};

/// Numerically stable softmax (max subtraction). Input must be nonempty
/// and finite. Exposed so properties like shift invariance can be checked
/// directly at the logit level.
std::vector<double> softmax(std::span<const double> logits);

/// Scaled dot-product similarity of one CLS row against every visual row:
/// softmax(cls . visual_i / sqrt(d)) with d = cls.cols. Output is in
/// original token order and sums to 1.
///
/// Requires cls.rows == 1, cls.cols == visual.cols, visual.rows >= 1;
/// throws std::invalid_argument otherwise.
std::vector<double> cls_similarity(const EmbeddingMatrix& cls, const EmbeddingMatrix& visual);

/// Sorts similarities descending, stable for ties (lower original index
/// first). Throws std::invalid_argument on empty or non-finite input.
SimilarityCurve sort_descending(std::span<const double> sims);

}  // namespace ltprune
