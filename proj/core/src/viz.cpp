// SPDX-License-Identifier: Apache-2.0

#include "ltprune/viz.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ltprune {

GrayImage render_mask(const IndexMask& mask, std::size_t grid_w, std::size_t grid_h) {
    mask.validate();
    if (grid_w * grid_h != mask.total) {
        throw std::invalid_argument("grid " + std::to_string(grid_w) + "x" +
                                    std::to_string(grid_h) + " does not cover " +
                                    std::to_string(mask.total) + " tokens");
    }
    GrayImage image;
    image.width = grid_w;
    image.height = grid_h;
    image.pixels.assign(mask.total, kPrunedPixel);
    for (std::size_t index : mask.kept) {
        image.pixels[index] = kKeptPixel;
    }
    return image;
}

GrayImage apply_mask_to_image(const IndexMask& mask, std::size_t grid_w, std::size_t grid_h,
                              const GrayImage& source) {
    mask.validate();
    if (grid_w * grid_h != mask.total) {
        throw std::invalid_argument("grid " + std::to_string(grid_w) + "x" +
                                    std::to_string(grid_h) + " does not cover " +
                                    std::to_string(mask.total) + " tokens");
    }
    if (grid_w == 0 || grid_h == 0 || source.width % grid_w != 0 || source.height % grid_h != 0) {
        throw std::invalid_argument("image " + std::to_string(source.width) + "x" +
                                    std::to_string(source.height) +
                                    " is not a multiple of the patch grid");
    }
    const std::size_t patch_w = source.width / grid_w;
    const std::size_t patch_h = source.height / grid_h;

    GrayImage out = source;
    for (std::size_t token = 0; token < mask.total; ++token) {
        if (mask.contains(token)) {
            continue;
        }
        const std::size_t gx = token % grid_w;
        const std::size_t gy = token / grid_w;
        for (std::size_t y = gy * patch_h; y < (gy + 1) * patch_h; ++y) {
            for (std::size_t x = gx * patch_w; x < (gx + 1) * patch_w; ++x) {
                out.pixels[y * out.width + x] = kPrunedPixel;
            }
        }
    }
    return out;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
    if (image.width == 0 || image.height == 0 ||
        image.pixels.size() != image.width * image.height) {
        throw std::invalid_argument("image dimensions do not match pixel count");
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw io_error("cannot open file for writing: " + path.string());
    }
    os << "P5\n" << image.width << " " << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.pixels.data()),
             static_cast<std::streamsize>(image.pixels.size()));
    if (!os) {
        throw io_error("write failed: " + path.string());
    }
}

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one unsigned value.
std::size_t read_pnm_value(std::istream& in, const std::filesystem::path& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') {
                c = in.get();
            }
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) {
        throw io_error(path.string() + ": malformed PGM header");
    }
    std::size_t value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + static_cast<std::size_t>(c - '0');
        c = in.get();
    }
    return value;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open file: " + path.string());
    }
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') {
        throw io_error(path.string() + ": not a binary PGM (P5) file");
    }
    GrayImage image;
    image.width = read_pnm_value(in, path);
    image.height = read_pnm_value(in, path);
    std::size_t maxval = read_pnm_value(in, path);
    if (maxval != 255) {
        throw io_error(path.string() + ": unsupported maxval " + std::to_string(maxval));
    }
    if (image.width == 0 || image.height == 0) {
        throw io_error(path.string() + ": empty image");
    }
    // read_pnm_value already consumed the single separator byte after maxval.
    image.pixels.resize(image.width * image.height);
    in.read(reinterpret_cast<char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.pixels.size())) {
        throw io_error(path.string() + ": truncated pixel data");
    }
    return image;
}

}  // namespace ltprune
