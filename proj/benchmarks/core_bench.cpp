// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "ltprune/eviction.hpp"
#include "ltprune/pipeline.hpp"
#include "ltprune/segmentation.hpp"
#include "ltprune/similarity.hpp"

namespace {

using namespace ltprune;

EmbeddingMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t seed,
                              Role role = Role::visual) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    EmbeddingMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.role = role;
    m.data.resize(rows * cols);
    for (float& v : m.data) {
        v = dist(rng);
    }
    return m;
}

void BM_ClsSimilarity(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    EmbeddingMatrix visual = random_matrix(n, 1024, 1);
    EmbeddingMatrix cls = random_matrix(1, 1024, 2, Role::cls);
    for (auto _ : state) {
        auto sims = cls_similarity(cls, visual);
        benchmark::DoNotOptimize(sims);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ClsSimilarity)->Arg(144)->Arg(576)->Arg(2304);

void BM_FindSplit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(n);
    for (double& v : values) {
        v = dist(rng);
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    SimilarityCurve curve = sort_descending(values);
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_split(curve));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FindSplit)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_RunStream(benchmark::State& state) {
    const auto length = static_cast<std::size_t>(state.range(0));
    EmbeddingMatrix tokens = random_matrix(length, 256, 5);
    EvictionConfig config = EvictionConfig::from_ratios(0.5, 0.5, length / 2);
    for (auto _ : state) {
        auto result = run_stream(tokens, length, config);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(length));
}
BENCHMARK(BM_RunStream)->Arg(64)->Arg(256)->Arg(636);

void BM_FullPipeline(benchmark::State& state) {
    EmbeddingMatrix visual = random_matrix(576, 256, 7);
    EmbeddingMatrix cls = random_matrix(1, 256, 8, Role::cls);
    EmbeddingMatrix text = random_matrix(60, 256, 9, Role::text);
    PipelineConfig config;
    for (auto _ : state) {
        auto report = run_pipeline(cls, visual, &text, config);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_FullPipeline);

}  // namespace

BENCHMARK_MAIN();
