// SPDX-License-Identifier: Apache-2.0

#include "ltprune/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ltprune/text_format.hpp"

namespace ltprune {

namespace {

void require_sorted(const SimilarityCurve& curve) {
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
        if (curve.values[i] > curve.values[i - 1]) {
            throw std::invalid_argument("curve not sorted descending at position " +
                                        std::to_string(i));
        }
    }
}

// Round half away from zero; inputs here are always positive.
std::size_t round_count(double x) {
    return static_cast<std::size_t>(std::llround(x));
}

}  // namespace

SmoothingMode parse_smoothing_mode(std::string_view name) {
    if (name == "multiply") return SmoothingMode::multiply;
    if (name == "identity") return SmoothingMode::identity;
    if (name == "expand") return SmoothingMode::expand;
    throw std::invalid_argument("unknown smoothing mode '" + std::string(name) +
                                "' (expected multiply, identity or expand)");
}

std::string_view to_string(SmoothingMode mode) {
    switch (mode) {
    case SmoothingMode::multiply:
        return "multiply";
    case SmoothingMode::identity:
        return "identity";
    case SmoothingMode::expand:
        return "expand";
    }
    throw std::invalid_argument("unknown smoothing mode");
}

bool is_flat(const SimilarityCurve& curve) {
    if (curve.values.empty()) {
        throw std::invalid_argument("empty curve");
    }
    return curve.values.front() == curve.values.back();
}

std::vector<double> split_objective(const SimilarityCurve& curve) {
    const std::size_t n = curve.size();
    if (n < 2) {
        throw std::invalid_argument("split_objective: need at least 2 values, got " +
                                    std::to_string(n));
    }
    require_sorted(curve);
    const double d1 = curve.values.front();
    const double dn = curve.values.back();
    const double c = d1 - dn;
    if (c == 0.0) {
        throw std::invalid_argument("split_objective: flat curve (d1 == dn), no split signal");
    }
    std::vector<double> f(n - 1);
    for (std::size_t i = 1; i <= n - 1; ++i) {
        f[i - 1] = static_cast<double>(n - i) * (d1 - curve.values[i - 1]) / c;
    }
    return f;
}

std::size_t find_split(const SimilarityCurve& curve) {
    std::vector<double> f = split_objective(curve);
    // Smallest i among maximizers.
    std::size_t best = 1;
    for (std::size_t i = 2; i <= f.size(); ++i) {
        if (f[i - 1] > f[best - 1]) {
            best = i;
        }
    }
    return best;
}

std::size_t apply_smoothing(std::size_t i_star, double alpha, std::size_t n, SmoothingMode mode) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be positive, got " + format_double(alpha));
    }
    if (n < 2 || i_star < 1 || i_star > n - 1) {
        throw std::invalid_argument("i_star " + std::to_string(i_star) + " out of range for n=" +
                                    std::to_string(n));
    }
    std::size_t k = 0;
    switch (mode) {
    case SmoothingMode::multiply:
        k = round_count(alpha * static_cast<double>(i_star));
        break;
    case SmoothingMode::identity:
        return i_star;
    case SmoothingMode::expand:
        k = round_count((1.0 + alpha) * static_cast<double>(i_star));
        break;
    }
    return std::clamp<std::size_t>(k, 1, n);
}

SplitResult compute_split(const SimilarityCurve& curve, double alpha, SmoothingMode mode) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be positive, got " + format_double(alpha));
    }
    SplitResult result;
    result.alpha = alpha;
    result.mode = mode;
    if (is_flat(curve)) {
        // No long tail to cut; retain everything.
        result.flat = true;
        result.kept_count = curve.size();
        return result;
    }
    require_sorted(curve);
    result.objective = split_objective(curve);
    result.i_star = 1;
    for (std::size_t i = 2; i <= result.objective.size(); ++i) {
        if (result.objective[i - 1] > result.objective[result.i_star - 1]) {
            result.i_star = i;
        }
    }
    result.kept_count = apply_smoothing(result.i_star, alpha, curve.size(), mode);
    return result;
}

IndexMask stage1_mask(const SimilarityCurve& curve, std::size_t kept_count) {
    const std::size_t n = curve.size();
    if (kept_count < 1 || kept_count > n) {
        throw std::invalid_argument("kept_count " + std::to_string(kept_count) +
                                    " out of range [1, " + std::to_string(n) + "]");
    }
    if (curve.source_index.size() != n) {
        throw std::invalid_argument("curve source_index length mismatch");
    }
    IndexMask mask;
    mask.total = n;
    mask.kept.assign(curve.source_index.begin(),
                     curve.source_index.begin() + static_cast<std::ptrdiff_t>(kept_count));
    std::sort(mask.kept.begin(), mask.kept.end());
    mask.validate();
    return mask;
}

std::string split_result_csv(const SplitResult& result) {
    std::string out = "i,f_i\n";
    for (std::size_t i = 1; i <= result.objective.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(result.objective[i - 1]);
        out += '\n';
    }
    return out;
}

}  // namespace ltprune
