// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "ltprune/viz.hpp"
#include "test_util.hpp"

using namespace ltprune;

TEST_CASE("2x2 grid renders kept corners white") {
    IndexMask mask{4, {0, 3}};
    GrayImage image = render_mask(mask, 2, 2);
    CHECK(image.width == 2);
    CHECK(image.height == 2);
    CHECK(image.pixels == std::vector<std::uint8_t>{255, 128, 128, 255});
}

TEST_CASE("full mask renders all white") {
    GrayImage image = render_mask(IndexMask::identity(12), 4, 3);
    CHECK(std::all_of(image.pixels.begin(), image.pixels.end(),
                      [](std::uint8_t p) { return p == kKeptPixel; }));
}

TEST_CASE("24x24 grid: grey pixel count equals dropped tokens") {
    std::mt19937 rng(113);
    IndexMask mask;
    mask.total = 576;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < 576; ++i) {
        if (coin(rng) < 0.4) {
            mask.kept.push_back(i);
        }
    }
    REQUIRE(!mask.kept.empty());

    GrayImage image = render_mask(mask, 24, 24);
    CHECK(image.width == 24);
    CHECK(image.height == 24);
    auto grey = static_cast<std::size_t>(
        std::count(image.pixels.begin(), image.pixels.end(), kPrunedPixel));
    CHECK(grey == 576 - mask.kept.size());
}

TEST_CASE("grid must cover the mask exactly") {
    IndexMask mask{6, {0, 5}};
    CHECK_THROWS_AS(render_mask(mask, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(apply_mask_to_image(mask, 2, 2, GrayImage{4, 4, std::vector<std::uint8_t>(16)}),
                    std::invalid_argument);
}

TEST_CASE("patch overlay copies kept pixels and greys pruned patches") {
    GrayImage source;
    source.width = 4;
    source.height = 4;
    source.pixels.resize(16);
    for (std::size_t i = 0; i < 16; ++i) {
        source.pixels[i] = static_cast<std::uint8_t>(i * 10);
    }
    // 2x2 grid of 2x2 patches; token 1 (top right) and 2 (bottom left) pruned.
    IndexMask mask{4, {0, 3}};
    GrayImage out = apply_mask_to_image(mask, 2, 2, source);

    CHECK(out.at(0, 0) == source.at(0, 0));
    CHECK(out.at(1, 1) == source.at(1, 1));
    CHECK(out.at(2, 0) == kPrunedPixel);
    CHECK(out.at(3, 1) == kPrunedPixel);
    CHECK(out.at(0, 2) == kPrunedPixel);
    CHECK(out.at(1, 3) == kPrunedPixel);
    CHECK(out.at(2, 2) == source.at(2, 2));
    CHECK(out.at(3, 3) == source.at(3, 3));
}

TEST_CASE("overlay requires the image to tile into the grid") {
    IndexMask mask{4, {0}};
    GrayImage source{5, 4, std::vector<std::uint8_t>(20)};
    CHECK_THROWS_AS(apply_mask_to_image(mask, 2, 2, source), std::invalid_argument);
}

TEST_CASE("pgm write/read round trip") {
    test::TempDir dir;
    GrayImage image = render_mask(IndexMask{4, {0, 3}}, 2, 2);
    write_pgm(image, dir.file("m.pgm"));

    std::string bytes = test::read_file(dir.file("m.pgm"));
    CHECK(bytes == std::string("P5\n2 2\n255\n") + '\xff' + '\x80' + '\x80' + '\xff');

    GrayImage loaded = read_pgm(dir.file("m.pgm"));
    CHECK(loaded == image);
}

TEST_CASE("pgm reader accepts comments and rejects junk") {
    test::TempDir dir;
    std::string with_comment = "P5\n# patch grid\n2 1\n255\nAB";
    test::write_file(dir.file("c.pgm"), with_comment);
    GrayImage image = read_pgm(dir.file("c.pgm"));
    CHECK(image.width == 2);
    CHECK(image.height == 1);
    CHECK(image.pixels == std::vector<std::uint8_t>{'A', 'B'});

    test::write_file(dir.file("bad.pgm"), "P6\n2 1\n255\nAB");
    CHECK_THROWS_AS(read_pgm(dir.file("bad.pgm")), io_error);
    test::write_file(dir.file("short.pgm"), "P5\n2 2\n255\nAB");
    CHECK_THROWS_AS(read_pgm(dir.file("short.pgm")), io_error);
    test::write_file(dir.file("deep.pgm"), "P5\n2 1\n65535\nAB");
    CHECK_THROWS_AS(read_pgm(dir.file("deep.pgm")), io_error);
}
