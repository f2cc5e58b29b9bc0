// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ltprune/similarity.hpp"
#include "test_util.hpp"

using namespace ltprune;

namespace {

// Direct evaluation of softmax(cls . v_i / sqrt(d)), no stabilization --
// the oracle for the two-token fixture.
std::vector<double> oracle_similarity(const std::vector<double>& cls,
                                      const std::vector<std::vector<double>>& visual) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(cls.size()));
    std::vector<double> e;
    double sum = 0.0;
    for (const auto& row : visual) {
        double dot = 0.0;
        for (std::size_t k = 0; k < cls.size(); ++k) {
            dot += cls[k] * row[k];
        }
        e.push_back(std::exp(dot * scale));
        sum += e.back();
    }
    for (double& v : e) {
        v /= sum;
    }
    return e;
}

EmbeddingMatrix matrix_from(std::size_t rows, std::size_t cols, std::vector<float> data,
                            Role role = Role::visual) {
    return EmbeddingMatrix{rows, cols, role, std::move(data)};
}

}  // namespace

TEST_CASE("two-token fixture matches direct evaluation") {
    EmbeddingMatrix cls = matrix_from(1, 2, {1.0f, 0.0f}, Role::cls);
    EmbeddingMatrix visual = matrix_from(2, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    std::vector<double> sims = cls_similarity(cls, visual);

    std::vector<double> expected = oracle_similarity({1.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
    REQUIRE(sims.size() == 2);
    CHECK(sims[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(sims[1] == doctest::Approx(expected[1]).epsilon(1e-12));
    // The logits are [1/sqrt(2), 0]; probabilities land near [0.66976, 0.33024].
    CHECK(sims[0] == doctest::Approx(0.6697615493).epsilon(1e-8));
    CHECK(sims[1] == doctest::Approx(0.3302384507).epsilon(1e-8));
}

TEST_CASE("identical visual rows give uniform probabilities") {
    for (std::size_t k : {1, 2, 5, 17}) {
        EmbeddingMatrix cls = matrix_from(1, 3, {0.3f, -1.2f, 0.7f}, Role::cls);
        EmbeddingMatrix visual;
        visual.rows = k;
        visual.cols = 3;
        for (std::size_t i = 0; i < k; ++i) {
            visual.data.insert(visual.data.end(), {1.0f, 2.0f, -0.5f});
        }
        std::vector<double> sims = cls_similarity(cls, visual);
        for (double v : sims) {
            CHECK(v == doctest::Approx(1.0 / static_cast<double>(k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("single visual token softmaxes to one") {
    EmbeddingMatrix cls = matrix_from(1, 4, {1.0f, 2.0f, 3.0f, 4.0f}, Role::cls);
    EmbeddingMatrix visual = matrix_from(1, 4, {-1.0f, 0.5f, 2.0f, 0.0f});
    std::vector<double> sims = cls_similarity(cls, visual);
    REQUIRE(sims.size() == 1);
    CHECK(sims[0] == 1.0);
}

TEST_CASE("dimension preconditions are enforced") {
    EmbeddingMatrix cls = matrix_from(1, 2, {1.0f, 0.0f}, Role::cls);
    EmbeddingMatrix two_rows = matrix_from(2, 2, {1.0f, 0.0f, 0.0f, 1.0f}, Role::cls);
    EmbeddingMatrix visual3 = matrix_from(1, 3, {1.0f, 0.0f, 0.0f});

    CHECK_THROWS_AS(cls_similarity(two_rows, visual3), std::invalid_argument);
    CHECK_THROWS_AS(cls_similarity(cls, visual3), std::invalid_argument);
}

TEST_CASE("softmax rows sum to one") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<std::size_t> n_dist(1, 1024);
    std::uniform_real_distribution<double> logit(-30.0, 30.0);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<double> logits(n_dist(rng));
        for (double& v : logits) {
            v = logit(rng);
        }
        std::vector<double> p = softmax(logits);
        double sum = std::accumulate(p.begin(), p.end(), 0.0);
        CHECK(std::abs(sum - 1.0) <= 1e-5);
        CHECK(std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0 && v <= 1.0; }));
    }
}

TEST_CASE("softmax is shift invariant at the logit level") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> logit(-10.0, 10.0);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> logits(32);
        for (double& v : logits) {
            v = logit(rng);
        }
        double c = shift(rng);
        std::vector<double> shifted = logits;
        for (double& v : shifted) {
            v += c;
        }
        std::vector<double> a = softmax(logits);
        std::vector<double> b = softmax(shifted);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i] - b[i]) <= 1e-6);
        }
    }
}

TEST_CASE("softmax survives extreme logits without overflow") {
    std::vector<double> logits = {1000.0, 999.0, -1000.0};
    std::vector<double> p = softmax(logits);
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(p[0] > p[1]);
    CHECK(p[2] < 1e-12);
}

TEST_CASE("sort_descending small permutation") {
    std::vector<double> sims = {0.2, 0.5, 0.3};
    SimilarityCurve curve = sort_descending(sims);
    CHECK(curve.values == std::vector<double>{0.5, 0.3, 0.2});
    CHECK(curve.source_index == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("sort_descending of sorted input is the identity permutation") {
    std::vector<double> sims = {0.9, 0.5, 0.1};
    SimilarityCurve curve = sort_descending(sims);
    CHECK(curve.values == sims);
    CHECK(curve.source_index == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("sort_descending ties keep lower original index first") {
    std::vector<double> sims = {0.5, 0.3, 0.5};
    SimilarityCurve curve = sort_descending(sims);
    CHECK(curve.values == std::vector<double>{0.5, 0.5, 0.3});
    CHECK(curve.source_index == std::vector<std::size_t>{0, 2, 1});
}

TEST_CASE("sort_descending matches a reference sort and composes back") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> sims(576);
    for (double& v : sims) {
        v = dist(rng);
    }
    double sum = std::accumulate(sims.begin(), sims.end(), 0.0);
    for (double& v : sims) {
        v /= sum;
    }

    SimilarityCurve curve = sort_descending(sims);

    // Reference: explicit (value desc, index asc) ordering over tagged pairs.
    std::vector<std::pair<double, std::size_t>> tagged;
    for (std::size_t i = 0; i < sims.size(); ++i) {
        tagged.emplace_back(sims[i], i);
    }
    std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        CHECK(curve.values[i] == tagged[i].first);
        CHECK(curve.source_index[i] == tagged[i].second);
    }

    // source_index is a permutation and composes back to the input.
    std::vector<std::size_t> seen(sims.size(), 0);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        seen[curve.source_index[i]] += 1;
        CHECK(sims[curve.source_index[i]] == curve.values[i]);
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](std::size_t c) { return c == 1; }));
}

TEST_CASE("empty and non-finite inputs are rejected") {
    CHECK_THROWS_AS(sort_descending(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(softmax(std::vector<double>{}), std::invalid_argument);
    std::vector<double> bad = {0.5, std::nan("")};
    CHECK_THROWS_AS(sort_descending(bad), std::invalid_argument);
    CHECK_THROWS_AS(softmax(bad), std::invalid_argument);
}
