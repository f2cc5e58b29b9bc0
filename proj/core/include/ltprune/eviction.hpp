// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ltprune/tensor_io.hpp"

namespace ltprune {

/// Budgets for the streaming eviction stage. The recent budget M protects
/// the M most recently arrived tokens unconditionally; the heavy budget N
/// is the room left for high-importance older tokens. Once more than M+N
/// tokens are live, every new arrival evicts the lowest-scoring token
/// outside the recent window.
struct EvictionConfig {
    std::size_t heavy_budget = 1;   // N, must be >= 1
    std::size_t recent_budget = 0;  // M
    /// When true (default) an arriving token's own softmax weight seeds
    /// its importance score; when false it starts at zero.
    bool include_self = true;

    /// Budgets from fractions of a declared cache budget:
    /// M = round(recent_ratio * budget), N = round(heavy_ratio * budget).
    /// Throws std::invalid_argument when the rounded N is zero.
    static EvictionConfig from_ratios(double heavy_ratio, double recent_ratio, std::size_t budget);

    std::size_t cache_capacity() const {
        return heavy_budget + recent_budget;
    }

    void validate() const;
};

/// One entry of the eviction log: at arrival number `step` (1-based count
/// of tokens seen), token `index` left the live set carrying `score`.
struct EvictionRecord {
    std::size_t step = 0;
    std::size_t index = 0;
    double score = 0.0;

    bool operator==(const EvictionRecord&) const = default;
};

/// Bookkeeping for one stream. Token ids are assigned by arrival order
/// (0-based), so recency comparisons are id comparisons.
struct EvictionState {
    /// Accumulated importance per token id, for every token seen so far.
    /// Monotone non-decreasing while a token is live; frozen at eviction.
    std::vector<double> scores;
    /// Currently retained token ids, ascending.
    std::vector<std::size_t> live;
    /// Number of tokens seen so far (X).
    std::size_t processed = 0;
    /// Eviction log in order of occurrence.
    std::vector<EvictionRecord> evicted;

    bool is_live(std::size_t index) const;
};

/// Advances the stream by one arriving token.
///
/// `attention_row` holds one nonnegative weight per live token in
/// ascending-id order plus, last, the arriving token's self-weight
/// (length |live| + 1). The arriving token joins the live set scored by
/// its self-weight, every live token's score grows by the arriving
/// token's attention to it, and if the live set now exceeds M+N the
/// minimum-score token outside the last-M-arrivals window is evicted
/// (ties broken toward the lowest id).
///
/// Throws std::invalid_argument on row length mismatch or negative
/// weights.
EvictionState step(EvictionState state, std::span<const double> attention_row,
                   const EvictionConfig& config);

/// Streaming evictor that owns the attention computation: for each fed
/// token it computes causal scaled dot-product softmax attention over the
/// live tokens plus itself (same 1/sqrt(d) scaling as the stage-1
/// similarity) and applies step(). Feeding may be resumed with further
/// matrices to model decode-time continuation.
class StreamEvictor {
public:
    StreamEvictor(EvictionConfig config, std::size_t dim);

    /// Appends every row of `tokens` to the stream, in order.
    /// Requires tokens.cols == dim().
    void feed(const EmbeddingMatrix& tokens);

    const EvictionState& state() const {
        return m_state;
    }
    std::size_t dim() const {
        return m_dim;
    }

    /// Retention mask over all tokens seen so far.
    IndexMask mask() const;

private:
    EvictionConfig m_config;
    std::size_t m_dim;
    std::vector<double> m_embeddings;  // row per token seen, id-indexed
    EvictionState m_state;
};

struct StreamResult {
    IndexMask mask;
    EvictionState state;
    /// First text token id; tokens below it are visual.
    std::size_t boundary = 0;
};

/// Runs the full stream in one call. `boundary` is the index of the first
/// text token (tokens before it are visual); it does not change scoring,
/// all tokens compete under the same rule. Throws std::invalid_argument
/// when boundary > tokens.rows.
StreamResult run_stream(const EmbeddingMatrix& tokens, std::size_t boundary,
                        const EvictionConfig& config);

/// CSV with columns step,evicted_index,score_at_eviction.
std::string eviction_log_csv(const EvictionState& state);

}  // namespace ltprune
