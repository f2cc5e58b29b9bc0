// SPDX-License-Identifier: Apache-2.0

#include "ltprune/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "ltprune/text_format.hpp"

namespace ltprune {

EmbeddingMatrix select_rows(const EmbeddingMatrix& m, const IndexMask& mask) {
    m.validate();
    mask.validate();
    if (mask.total != m.rows) {
        throw std::invalid_argument("mask total " + std::to_string(mask.total) +
                                    " does not match matrix rows " + std::to_string(m.rows));
    }
    EmbeddingMatrix out;
    out.rows = mask.kept.size();
    out.cols = m.cols;
    out.role = m.role;
    out.data.reserve(out.rows * out.cols);
    for (std::size_t index : mask.kept) {
        auto row = m.row(index);
        out.data.insert(out.data.end(), row.begin(), row.end());
    }
    return out;
}

EmbeddingMatrix project_rows(const EmbeddingMatrix& m, const EmbeddingMatrix& projection) {
    m.validate();
    projection.validate();
    if (projection.rows != m.cols) {
        throw std::invalid_argument("projection rows " + std::to_string(projection.rows) +
                                    " do not match input cols " + std::to_string(m.cols));
    }
    EmbeddingMatrix out;
    out.rows = m.rows;
    out.cols = projection.cols;
    out.role = m.role;
    out.data.resize(out.rows * out.cols);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < projection.cols; ++c) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m.cols; ++k) {
                acc += static_cast<double>(m.at(r, k)) *
                       static_cast<double>(projection.at(k, c));
            }
            out.data[r * out.cols + c] = static_cast<float>(acc);
        }
    }
    return out;
}

EmbeddingMatrix concat_rows(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    a.validate();
    b.validate();
    if (a.cols != b.cols) {
        throw std::invalid_argument("cannot concatenate: " + std::to_string(a.cols) +
                                    " cols vs " + std::to_string(b.cols));
    }
    EmbeddingMatrix out;
    out.rows = a.rows + b.rows;
    out.cols = a.cols;
    out.role = a.role;
    out.data.reserve(out.rows * out.cols);
    out.data.insert(out.data.end(), a.data.begin(), a.data.end());
    out.data.insert(out.data.end(), b.data.begin(), b.data.end());
    return out;
}

EvictionConfig resolve_eviction_config(const PipelineConfig& config, std::size_t sequence_length) {
    if (config.eviction) {
        EvictionConfig resolved = *config.eviction;
        resolved.include_self = config.include_self;
        resolved.validate();
        return resolved;
    }
    std::size_t budget = config.cache_budget
                             ? *config.cache_budget
                             : static_cast<std::size_t>(
                                   std::llround(0.5 * static_cast<double>(sequence_length)));
    EvictionConfig resolved =
        EvictionConfig::from_ratios(config.heavy_ratio, config.recent_ratio, budget);
    resolved.include_self = config.include_self;
    return resolved;
}

PipelineReport run_pipeline(const EmbeddingMatrix& cls, const EmbeddingMatrix& visual,
                            const EmbeddingMatrix* text, const PipelineConfig& config) {
    // Stage 1: long-tail split on the CLS-similarity curve.
    std::vector<double> sims = cls_similarity(cls, visual);
    SimilarityCurve curve = sort_descending(sims);
    SplitResult split = compute_split(curve, config.alpha, config.smoothing);
    IndexMask stage1 = stage1_mask(curve, split.kept_count);

    // Map survivors into the text feature space and append the text tokens.
    EmbeddingMatrix kept_visual = select_rows(visual, stage1);
    if (config.projection) {
        kept_visual = project_rows(kept_visual, *config.projection);
    }
    if (text != nullptr && config.projection && config.projection->cols != text->cols) {
        throw std::invalid_argument("projection maps to " +
                                    std::to_string(config.projection->cols) +
                                    " dims but text has " + std::to_string(text->cols));
    }
    EmbeddingMatrix sequence = text != nullptr ? concat_rows(kept_visual, *text) : kept_visual;

    // Stage 2: visual-text interactive eviction over the whole sequence.
    EvictionConfig eviction = resolve_eviction_config(config, sequence.rows);
    StreamResult stream = run_stream(sequence, kept_visual.rows, eviction);

    PipelineReport report;
    report.visual_in = visual.rows;
    report.visual_after_stage1 = stage1.kept.size();
    report.text_in = text != nullptr ? text->rows : 0;
    report.total_after_concat = sequence.rows;
    report.total_after_stage2 = stream.mask.kept.size();
    report.stage1_mask = std::move(stage1);
    report.stage2_mask = std::move(stream.mask);
    report.compression_ratio = static_cast<double>(report.total_after_stage2) /
                               static_cast<double>(report.visual_in + report.text_in);
    return report;
}

std::string token_accounting_text(const PipelineReport& report) {
    std::string out;
    out += "visual_in: " + std::to_string(report.visual_in) + "\n";
    out += "visual_after_stage1: " + std::to_string(report.visual_after_stage1) + "\n";
    out += "text_in: " + std::to_string(report.text_in) + "\n";
    out += "total_after_concat: " + std::to_string(report.total_after_concat) + "\n";
    out += "total_after_stage2: " + std::to_string(report.total_after_stage2) + "\n";
    out += "compression_ratio: " + format_double(report.compression_ratio) + "\n";
    return out;
}

std::string token_accounting_csv(const PipelineReport& report) {
    std::string out = "metric,value\n";
    out += "visual_in," + std::to_string(report.visual_in) + "\n";
    out += "visual_after_stage1," + std::to_string(report.visual_after_stage1) + "\n";
    out += "text_in," + std::to_string(report.text_in) + "\n";
    out += "total_after_concat," + std::to_string(report.total_after_concat) + "\n";
    out += "total_after_stage2," + std::to_string(report.total_after_stage2) + "\n";
    out += "compression_ratio," + format_double(report.compression_ratio) + "\n";
    return out;
}

}  // namespace ltprune
