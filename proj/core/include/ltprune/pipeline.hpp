// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ltprune/eviction.hpp"
#include "ltprune/segmentation.hpp"
#include "ltprune/similarity.hpp"
#include "ltprune/tensor_io.hpp"

namespace ltprune {

/// Knobs for the full two-stage run.
struct PipelineConfig {
    double alpha = 0.24;
    SmoothingMode smoothing = SmoothingMode::multiply;

    /// Explicit stage-2 budgets win when set; otherwise budgets derive
    /// from the ratios against cache_budget, which itself defaults to
    /// round(L/2) for the concatenated length L.
    std::optional<EvictionConfig> eviction;
    double heavy_ratio = 0.5;
    double recent_ratio = 0.5;
    std::optional<std::size_t> cache_budget;
    /// Stage-2 self-weight seeding; applied to the resolved eviction
    /// config whether budgets were explicit or ratio-derived.
    bool include_self = true;

    /// Maps surviving visual tokens into the text feature space
    /// ([d_vis x d_txt] matrix product); identity when absent.
    std::optional<EmbeddingMatrix> projection;
};

/// Token accounting for one run, the per-stage counts plus both masks.
struct PipelineReport {
    std::size_t visual_in = 0;
    std::size_t visual_after_stage1 = 0;
    std::size_t text_in = 0;
    std::size_t total_after_concat = 0;
    std::size_t total_after_stage2 = 0;
    IndexMask stage1_mask;  // over visual token positions
    IndexMask stage2_mask;  // over the concatenated [visual; text] sequence
    /// total_after_stage2 / (visual_in + text_in), in (0, 1].
    double compression_ratio = 0.0;
};

/// New matrix holding the masked rows, original order preserved.
/// Requires mask.total == m.rows.
EmbeddingMatrix select_rows(const EmbeddingMatrix& m, const IndexMask& mask);

/// Matrix product m * projection; accumulates in double, stores float.
/// Requires projection.rows == m.cols.
EmbeddingMatrix project_rows(const EmbeddingMatrix& m, const EmbeddingMatrix& projection);

/// Row-wise concatenation [a; b]. Requires equal cols.
EmbeddingMatrix concat_rows(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

/// The stage-2 config run_pipeline will use for a sequence of the given
/// length, after applying ratio/budget defaulting.
EvictionConfig resolve_eviction_config(const PipelineConfig& config, std::size_t sequence_length);

/// The full flow: stage-1 split on the CLS-similarity curve, projection
/// of the survivors, concatenation with text, stage-2 interactive
/// eviction. `text` may be null for image-only inputs; the CLS row is
/// consumed by stage 1 and never forwarded.
PipelineReport run_pipeline(const EmbeddingMatrix& cls, const EmbeddingMatrix& visual,
                            const EmbeddingMatrix* text, const PipelineConfig& config);

/// Deterministic renderings of the report counts.
std::string token_accounting_text(const PipelineReport& report);
std::string token_accounting_csv(const PipelineReport& report);

}  // namespace ltprune
