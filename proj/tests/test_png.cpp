#include <doctest.h>

#include <png.h>

#include <cstring>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>

#include "chromaforge/error.hpp"
#include "chromaforge/png_io.hpp"
#include "oracles.hpp"

using namespace chromaforge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "chromaforge_png_test";
    fs::create_directories(dir);
    return dir / name;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("png round trip is lossless for gray, rgb and rgba") {
    std::mt19937_64 rng(3);
    for (const ColorSpace cs : {ColorSpace::Gray, ColorSpace::Rgb, ColorSpace::Rgba}) {
        ImageBuffer img(17, 9, cs);
        for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng());
        const fs::path p = scratch(std::string("rt_") + to_string(cs) + ".png");
        write_png(img, p);
        CHECK(read_png(p) == img);
        CHECK(decode_png(encode_png(img, true)) == img);
    }
}

TEST_CASE("write(read(p)) reproduces the raster of an 8-bit RGB file") {
    std::mt19937_64 rng(9);
    const ImageBuffer img = oracle::random_rgb(12, 7, rng);
    const fs::path a = scratch("a.png"), b = scratch("b.png");
    write_png(img, a);
    write_png(read_png(a), b);
    CHECK(read_png(b) == img);
}

TEST_CASE("16-bit PNG is rejected with unsupported depth") {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = 4;
    image.height = 4;
    image.format = PNG_FORMAT_LINEAR_Y;
    std::vector<std::uint16_t> px(16, 40000);
    const fs::path p = scratch("deep.png");
    REQUIRE(png_image_write_to_file(&image, p.c_str(), 0, px.data(), 0, nullptr));
    CHECK(code_of([&] { read_png(p); }) == ErrorCode::UnsupportedDepth);
}

TEST_CASE("truncated and missing files map to distinct errors") {
    std::mt19937_64 rng(1);
    const auto bytes = encode_png(oracle::random_rgb(32, 32, rng));
    const fs::path p = scratch("trunc.png");
    {
        std::ofstream out(p, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK(code_of([&] { read_png(p); }) == ErrorCode::MalformedInput);
    CHECK(code_of([&] { read_png(scratch("nope.png")); }) == ErrorCode::NotFound);
    const fs::path junk = scratch("junk.png");
    std::ofstream(junk) << "not a png";
    CHECK(code_of([&] { read_png(junk); }) == ErrorCode::MalformedInput);
}

TEST_CASE("HSV rasters cannot be written") {
    CHECK_THROWS_AS(encode_png(ImageBuffer(2, 2, ColorSpace::Hsv)), Error);
}
