#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "riq/errors.hpp"
#include "riq/image.hpp"
#include "riq/rng.hpp"

using namespace riq;

namespace {

std::string tmp_path(const std::string& name) { return "/tmp/riq_image_test_" + name; }

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("ppm: white and black round numbers") {
    const std::string white = tmp_path("white.ppm");
    write_bytes(white, std::string("P6\n2 2\n255\n") + std::string(12, '\xff'));
    const auto w = load_image(white);
    CHECK(w.width == 2);
    CHECK(w.height == 2);
    for (double v : w.data) CHECK(v == 1.0);

    const std::string black = tmp_path("black.ppm");
    write_bytes(black, std::string("P6\n1 1\n255\n") + std::string(3, '\0'));
    const auto b = load_image(black);
    CHECK(b.width == 1);
    for (double v : b.data) CHECK(v == 0.0);
}

TEST_CASE("ppm: save/load round trip on exact byte values") {
    RasterImage img = RasterImage::constant(3, 2, 10 / 255.0, 128 / 255.0, 200 / 255.0);
    const std::string path = tmp_path("roundtrip.ppm");
    save_ppm(img, path);
    const auto back = load_image(path);
    REQUIRE(back.data.size() == img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(back.data[i] == doctest::Approx(img.data[i]).epsilon(1e-12));
}

TEST_CASE("load errors: missing file, bad magic, truncated payload") {
    CHECK_THROWS_AS(load_image("/tmp/riq_no_such_file_anywhere.ppm"), FileNotFound);

    const std::string garbage = tmp_path("garbage.bin");
    write_bytes(garbage, "this is not an image at all");
    CHECK_THROWS_AS(load_image(garbage), UnsupportedFormat);

    const std::string truncated = tmp_path("truncated.ppm");
    write_bytes(truncated, std::string("P6\n4 4\n255\n") + std::string(10, '\x40'));
    CHECK_THROWS_AS(load_image(truncated), CorruptImage);

    const std::string badpng = tmp_path("bad.png");
    write_bytes(badpng, std::string("\x89PNG\r\n\x1a\n") + "nothing else follows");
    CHECK_THROWS_AS(load_image(badpng), CorruptImage);

    const std::string maxval = tmp_path("maxval.ppm");
    write_bytes(maxval, std::string("P6\n1 1\n65535\n") + std::string(6, '\0'));
    CHECK_THROWS_AS(load_image(maxval), UnsupportedFormat);
}

TEST_CASE("rgb_to_hsv: primary colors and grays") {
    RasterImage px = RasterImage::constant(1, 1, 1.0, 0.0, 0.0);
    auto hsv = rgb_to_hsv(px);
    CHECK(hsv.at(0, 0, 0) == doctest::Approx(0.0));
    CHECK(hsv.at(0, 0, 1) == doctest::Approx(1.0));
    CHECK(hsv.at(0, 0, 2) == doctest::Approx(1.0));

    hsv = rgb_to_hsv(RasterImage::constant(1, 1, 0.0, 1.0, 0.0));
    CHECK(hsv.at(0, 0, 0) == doctest::Approx(120.0));

    hsv = rgb_to_hsv(RasterImage::constant(1, 1, 0.0, 0.0, 1.0));
    CHECK(hsv.at(0, 0, 0) == doctest::Approx(240.0));

    // achromatic: hue pinned to 0, saturation 0
    hsv = rgb_to_hsv(RasterImage::constant(1, 1, 0.5, 0.5, 0.5));
    CHECK(hsv.at(0, 0, 0) == 0.0);
    CHECK(hsv.at(0, 0, 1) == 0.0);
    CHECK(hsv.at(0, 0, 2) == doctest::Approx(0.5));

    hsv = rgb_to_hsv(RasterImage::constant(1, 1, 0.0, 0.0, 0.0));
    CHECK(hsv.at(0, 0, 1) == 0.0);
    CHECK(hsv.at(0, 0, 2) == 0.0);
}

TEST_CASE("hsv round trip on random chromatic colors") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        RasterImage px = RasterImage::constant(1, 1, rng.next_double(), rng.next_double(), rng.next_double());
        const auto back = hsv_to_rgb(rgb_to_hsv(px));
        for (int ch = 0; ch < 3; ++ch) CHECK(std::fabs(back.at(0, 0, ch) - px.at(0, 0, ch)) < 1e-6);
    }
}

TEST_CASE("resize: identity and constant preservation") {
    RasterImage img = RasterImage::constant(10, 7, 0.2, 0.4, 0.6);
    const auto same = resize_bilinear(img, 10, 7);
    CHECK(same.data == img.data);

    const auto up = resize_bilinear(img, 33, 19);
    CHECK(up.width == 33);
    CHECK(up.height == 19);
    for (std::size_t i = 0; i < up.data.size(); i += 3) {
        CHECK(up.data[i] == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(up.data[i + 1] == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(up.data[i + 2] == doctest::Approx(0.6).epsilon(1e-12));
    }
}

TEST_CASE("resize: 2x upsample of a 2x1 gradient interpolates linearly") {
    RasterImage img;
    img.width = 2;
    img.height = 1;
    img.data = {0, 0, 0, 1, 1, 1};
    const auto up = resize_bilinear(img, 4, 1);
    // pixel centers map to source coords -0.25, 0.25, 0.75, 1.25 (clamped)
    CHECK(up.at(0, 0, 0) == doctest::Approx(0.0));
    CHECK(up.at(0, 1, 0) == doctest::Approx(0.25));
    CHECK(up.at(0, 2, 0) == doctest::Approx(0.75));
    CHECK(up.at(0, 3, 0) == doctest::Approx(1.0));
}

TEST_CASE("gaussian blur: constant image is a fixed point") {
    RasterImage img = RasterImage::constant(16, 16, 0.3, 0.6, 0.9);
    const auto out = gaussian_blur(img, 5, 1.0);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(std::fabs(out.data[i] - img.data[i]) < 1e-12);
}

TEST_CASE("gaussian blur: preserves the mean of a periodic image") {
    // replicate-border blur conserves total mass on rows that tile evenly
    RasterImage img = RasterImage::constant(8, 8, 0, 0, 0);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) img.at(r, c, 0) = ((r + c) % 2 == 0) ? 1.0 : 0.0;
    const auto out = gaussian_blur(img, 3, 1.0);
    // a blur is an average: every output inside [min,max] of the input
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            CHECK(out.at(r, c, 0) >= 0.0);
            CHECK(out.at(r, c, 0) <= 1.0);
        }
    // and smoothing strictly reduces the checkerboard contrast in the interior
    CHECK(std::fabs(out.at(4, 4, 0) - 0.5) < 0.4);
}

TEST_CASE("preprocess: output is always target_size square in [0,1]") {
    RasterImage img = RasterImage::constant(100, 60, 0.8, 0.1, 0.3);
    PreprocessParams p;
    p.target_size = 64;
    const auto out = preprocess(img, p);
    CHECK(out.width == 64);
    CHECK(out.height == 64);
    for (double v : out.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("preprocess: constant image without equalization is a fixed point") {
    RasterImage img = RasterImage::constant(64, 64, 0.25, 0.5, 0.75);
    PreprocessParams p;
    p.target_size = 64;
    p.equalize = false;
    const auto out = preprocess(img, p);
    for (std::size_t i = 0; i < out.data.size(); ++i) CHECK(std::fabs(out.data[i] - img.data[i]) < 1e-6);
}

TEST_CASE("preprocess: constant image with equalization maps V to 1") {
    // every pixel shares one V bin, so cdf(v) = 1 for all of them
    RasterImage img = RasterImage::constant(64, 64, 0.5, 0.5, 0.5);  // gray, V = 0.5
    PreprocessParams p;
    p.target_size = 64;
    const auto out = preprocess(img, p);
    for (double v : out.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("preprocess: two-level V histogram equalizes to its CDF steps") {
    // top half gray 0.3, bottom half gray 0.6; cdf(0.3) = 0.5, cdf(0.6) = 1.0
    RasterImage img = RasterImage::constant(64, 64, 0, 0, 0);
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
            for (int ch = 0; ch < 3; ++ch) img.at(r, c, ch) = (r < 32) ? 0.3 : 0.6;
    PreprocessParams p;
    p.target_size = 64;
    const auto out = preprocess(img, p);
    // check interior pixels well away from the halfway seam the blur smears
    for (int c = 8; c < 56; c += 8) {
        CHECK(out.at(8, c, 0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(out.at(56, c, 0) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("preprocess: parameter validation") {
    PreprocessParams p;
    p.target_size = 8;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.gaussian_kernel = 4;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.gaussian_sigma = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("pgm: writes valid header and payload") {
    std::vector<std::uint8_t> gray = {0, 64, 128, 255, 32, 16};
    const std::string path = tmp_path("labels.pgm");
    save_pgm(gray, 3, 2, path);
    std::ifstream in(path, std::ios::binary);
    std::string header;
    std::getline(in, header);
    CHECK(header == "P5");
    CHECK_THROWS_AS(save_pgm(gray, 4, 2, path), IncompatibleSize);
}
