// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltprune/similarity.hpp"
#include "ltprune/tensor_io.hpp"

namespace ltprune::test {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        auto base = std::filesystem::temp_directory_path();
        m_path = base / ("ltprune_test_" + std::to_string(counter.fetch_add(1)) + "_" +
                         std::to_string(std::random_device{}()));
        std::filesystem::create_directories(m_path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const {
        return m_path;
    }
    std::filesystem::path file(const std::string& name) const {
        return m_path / name;
    }

private:
    std::filesystem::path m_path;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << text;
    if (!os) {
        throw std::runtime_error("test fixture write failed: " + path.string());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("test fixture read failed: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Curve over explicitly given descending values, identity source order.
inline SimilarityCurve make_curve(std::vector<double> values) {
    SimilarityCurve curve;
    curve.source_index.resize(values.size());
    std::iota(curve.source_index.begin(), curve.source_index.end(), std::size_t{0});
    curve.values = std::move(values);
    return curve;
}

inline EmbeddingMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937& rng,
                                     Role role = Role::visual) {
    std::uniform_real_distribution<float> dist(-2.0f, 2.0f);
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

/// Random descending curve of length n with values in (0, 1).
inline SimilarityCurve random_descending_curve(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> values(n);
    for (double& v : values) {
        v = dist(rng);
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    return make_curve(std::move(values));
}

}  // namespace ltprune::test
