// SPDX-License-Identifier: Apache-2.0

#include "ltprune/eviction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltprune/similarity.hpp"
#include "ltprune/text_format.hpp"

namespace ltprune {

EvictionConfig EvictionConfig::from_ratios(double heavy_ratio, double recent_ratio,
                                           std::size_t budget) {
    if (!(heavy_ratio > 0.0) || heavy_ratio > 1.0) {
        throw std::invalid_argument("heavy_ratio must be in (0, 1], got " +
                                    format_double(heavy_ratio));
    }
    if (recent_ratio < 0.0 || recent_ratio > 1.0) {
        throw std::invalid_argument("recent_ratio must be in [0, 1], got " +
                                    format_double(recent_ratio));
    }
    EvictionConfig config;
    config.heavy_budget =
        static_cast<std::size_t>(std::llround(heavy_ratio * static_cast<double>(budget)));
    config.recent_budget =
        static_cast<std::size_t>(std::llround(recent_ratio * static_cast<double>(budget)));
    config.validate();
    return config;
}

void EvictionConfig::validate() const {
    if (heavy_budget < 1) {
        throw std::invalid_argument("heavy_budget must be at least 1");
    }
}

bool EvictionState::is_live(std::size_t index) const {
    auto it = std::lower_bound(live.begin(), live.end(), index);
    return it != live.end() && *it == index;
}

EvictionState step(EvictionState state, std::span<const double> attention_row,
                   const EvictionConfig& config) {
    config.validate();
    if (state.scores.size() != state.processed) {
        throw std::invalid_argument("inconsistent state: " + std::to_string(state.scores.size()) +
                                    " scores for " + std::to_string(state.processed) +
                                    " processed tokens");
    }
    if (attention_row.size() != state.live.size() + 1) {
        throw std::invalid_argument("attention row length " +
                                    std::to_string(attention_row.size()) + " does not match " +
                                    std::to_string(state.live.size()) + " live tokens + self");
    }
    for (double w : attention_row) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("attention weights must be finite and nonnegative");
        }
    }

    const std::size_t arriving = state.processed;
    for (std::size_t j = 0; j < state.live.size(); ++j) {
        state.scores[state.live[j]] += attention_row[j];
    }
    state.scores.push_back(config.include_self ? attention_row.back() : 0.0);
    state.live.push_back(arriving);
    state.processed = arriving + 1;

    if (state.live.size() > config.cache_capacity()) {
        // Ids at or above the cutoff are the last M arrivals and untouchable.
        const std::size_t cutoff =
            state.processed >= config.recent_budget ? state.processed - config.recent_budget : 0;
        std::size_t victim_pos = state.live.size();
        for (std::size_t pos = 0; pos < state.live.size(); ++pos) {
            const std::size_t id = state.live[pos];
            if (id >= cutoff) {
                break;  // live is ascending, everything from here on is recent
            }
            if (victim_pos == state.live.size() ||
                state.scores[id] < state.scores[state.live[victim_pos]]) {
                victim_pos = pos;
            }
        }
        if (victim_pos == state.live.size()) {
            throw std::logic_error("no evictable token outside the recent window");
        }
        const std::size_t victim = state.live[victim_pos];
        state.evicted.push_back({state.processed, victim, state.scores[victim]});
        state.live.erase(state.live.begin() + static_cast<std::ptrdiff_t>(victim_pos));
    }
    return state;
}

StreamEvictor::StreamEvictor(EvictionConfig config, std::size_t dim)
    : m_config(config), m_dim(dim) {
    m_config.validate();
    if (dim == 0) {
        throw std::invalid_argument("embedding dimension must be positive");
    }
}

void StreamEvictor::feed(const EmbeddingMatrix& tokens) {
    tokens.validate();
    if (tokens.cols != m_dim) {
        throw std::invalid_argument("token dimension " + std::to_string(tokens.cols) +
                                    " does not match stream dimension " + std::to_string(m_dim));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(m_dim));
    for (std::size_t r = 0; r < tokens.rows; ++r) {
        auto row = tokens.row(r);
        std::vector<double> arriving(m_dim);
        for (std::size_t k = 0; k < m_dim; ++k) {
            arriving[k] = static_cast<double>(row[k]);
        }

        // Causal attention over live tokens plus self, ascending id order.
        std::vector<double> logits;
        logits.reserve(m_state.live.size() + 1);
        for (std::size_t id : m_state.live) {
            const double* other = m_embeddings.data() + id * m_dim;
            double dot = 0.0;
            for (std::size_t k = 0; k < m_dim; ++k) {
                dot += arriving[k] * other[k];
            }
            logits.push_back(dot * scale);
        }
        double self_dot = 0.0;
        for (std::size_t k = 0; k < m_dim; ++k) {
            self_dot += arriving[k] * arriving[k];
        }
        logits.push_back(self_dot * scale);

        std::vector<double> weights = softmax(logits);
        m_embeddings.insert(m_embeddings.end(), arriving.begin(), arriving.end());
        m_state = step(std::move(m_state), weights, m_config);
    }
}

IndexMask StreamEvictor::mask() const {
    IndexMask mask;
    mask.total = m_state.processed;
    mask.kept = m_state.live;
    mask.validate();
    return mask;
}

StreamResult run_stream(const EmbeddingMatrix& tokens, std::size_t boundary,
                        const EvictionConfig& config) {
    tokens.validate();
    if (boundary > tokens.rows) {
        throw std::invalid_argument("boundary " + std::to_string(boundary) +
                                    " out of range (stream length " +
                                    std::to_string(tokens.rows) + ")");
    }
    StreamEvictor evictor(config, tokens.cols);
    evictor.feed(tokens);
    StreamResult result;
    result.mask = evictor.mask();
    result.state = evictor.state();
    result.boundary = boundary;
    return result;
}

std::string eviction_log_csv(const EvictionState& state) {
    std::string out = "step,evicted_index,score_at_eviction\n";
    for (const EvictionRecord& record : state.evicted) {
        out += std::to_string(record.step);
        out += ',';
        out += std::to_string(record.index);
        out += ',';
        out += format_double(record.score);
        out += '\n';
    }
    return out;
}

}  // namespace ltprune
