// SPDX-License-Identifier: Apache-2.0

#include "ltprune/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ltprune {

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("softmax: empty input");
    }
    double max_logit = logits[0];
    for (double v : logits) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("softmax: non-finite logit");
        }
        max_logit = std::max(max_logit, v);
    }
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        sum += out[i];
    }
    for (double& v : out) {
        v /= sum;
    }
    return out;
}

std::vector<double> cls_similarity(const EmbeddingMatrix& cls, const EmbeddingMatrix& visual) {
    cls.validate();
    visual.validate();
    if (cls.rows != 1) {
        throw std::invalid_argument("cls_similarity: cls must have exactly 1 row, got " +
                                    std::to_string(cls.rows));
    }
    if (cls.cols != visual.cols) {
        throw std::invalid_argument("cls_similarity: dimension mismatch: cls has " +
                                    std::to_string(cls.cols) + " cols, visual has " +
                                    std::to_string(visual.cols));
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(cls.cols));
    std::vector<double> logits(visual.rows);
    for (std::size_t i = 0; i < visual.rows; ++i) {
        double dot = 0.0;
        auto row = visual.row(i);
        for (std::size_t k = 0; k < cls.cols; ++k) {
            dot += static_cast<double>(cls.data[k]) * static_cast<double>(row[k]);
        }
        logits[i] = dot * scale;
    }
    return softmax(logits);
}

SimilarityCurve sort_descending(std::span<const double> sims) {
    if (sims.empty()) {
        throw std::invalid_argument("sort_descending: empty input");
    }
    for (double v : sims) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("sort_descending: non-finite similarity");
        }
    }
    SimilarityCurve curve;
    curve.source_index.resize(sims.size());
    std::iota(curve.source_index.begin(), curve.source_index.end(), std::size_t{0});
    // Stable on values, so equal similarities keep lower original index first.
    std::stable_sort(curve.source_index.begin(), curve.source_index.end(),
                     [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
    curve.values.resize(sims.size());
    for (std::size_t i = 0; i < sims.size(); ++i) {
        curve.values[i] = sims[curve.source_index[i]];
    }
    return curve;
}

}  // namespace ltprune
