// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "ltprune/tensor_io.hpp"

namespace ltprune {

constexpr std::uint8_t kKeptPixel = 255;
constexpr std::uint8_t kPrunedPixel = 128;

/// 8-bit grayscale image, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(std::size_t x, std::size_t y) const {
        return pixels[y * width + x];
    }

    bool operator==(const GrayImage&) const = default;
};

/// One pixel per patch: kept patches white, pruned patches grey.
/// Token i maps to cell (i % grid_w, i / grid_w). Requires
/// grid_w * grid_h == mask.total.
GrayImage render_mask(const IndexMask& mask, std::size_t grid_w, std::size_t grid_h);

/// Fig-style overlay: kept patches copy the source pixels, pruned patches
/// turn grey. Source dimensions must be exact multiples of the grid.
GrayImage apply_mask_to_image(const IndexMask& mask, std::size_t grid_w, std::size_t grid_h,
                              const GrayImage& source);

/// Binary PGM (P5, maxval 255).
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace ltprune
