// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ltprune/similarity.hpp"
#include "ltprune/tensor_io.hpp"

namespace ltprune {

/// How the smoothing coefficient maps the split index to a kept count.
///   multiply: k = clamp(round(alpha * i_star), 1, n)   -- the default
///   identity: k = i_star
///   expand:   k = clamp(round((1 + alpha) * i_star), 1, n)
enum class SmoothingMode {
    multiply,
    identity,
    expand,
};

SmoothingMode parse_smoothing_mode(std::string_view name);
std::string_view to_string(SmoothingMode mode);

/// Outcome of segmenting one similarity curve.
struct SplitResult {
    /// f(i) for i = 1..n-1 (objective[0] holds f(1), which is always 0).
    /// Empty when the curve is flat and no split exists.
    std::vector<double> objective;
    /// 1-based optimal split index, smallest maximizer of f; 0 when flat.
    std::size_t i_star = 0;
    /// Tokens to retain, in [1, n].
    std::size_t kept_count = 0;
    double alpha = 0.0;
    SmoothingMode mode = SmoothingMode::multiply;
    /// True when d1 == dn (includes n == 1): no long tail, keep everything.
    bool flat = false;
};

/// True when the curve carries no split signal: n == 1 or d1 == dn.
bool is_flat(const SimilarityCurve& curve);

/// Objective f(i) = (n - i) * (d1 - di) / (d1 - dn) for i = 1..n-1.
/// Requires n >= 2, values sorted descending and a non-flat curve;
/// throws std::invalid_argument otherwise.
std::vector<double> split_objective(const SimilarityCurve& curve);

/// Smallest 1-based index maximizing f. Same preconditions as
/// split_objective.
std::size_t find_split(const SimilarityCurve& curve);

/// Maps the split index to a kept count under the given mode. Rounds
/// half away from zero, then clamps to [1, n]. Requires alpha > 0 and
/// 1 <= i_star <= n-1.
std::size_t apply_smoothing(std::size_t i_star, double alpha, std::size_t n, SmoothingMode mode);

/// Full stage-1 decision: objective, split index and kept count, with the
/// flat-curve case resolved to keep-all.
SplitResult compute_split(const SimilarityCurve& curve, double alpha, SmoothingMode mode);

/// Retention mask for the top-k similarity values, mapped back through
/// source_index and re-sorted ascending so spatial token order survives.
IndexMask stage1_mask(const SimilarityCurve& curve, std::size_t kept_count);

/// CSV with columns i,f_i; empty objective yields just the header line.
std::string split_result_csv(const SplitResult& result);

}  // namespace ltprune
