#include "chromaforge/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "chromaforge/error.hpp"

namespace chromaforge {
namespace {

class PngImage {
public:
    PngImage() {
        std::memset(&image_, 0, sizeof image_);
        image_.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image_); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;

    png_image* get() { return &image_; }
    png_image* operator->() { return &image_; }

private:
    png_image image_;
};

ImageBuffer finish_read(PngImage& img, const std::string& origin) {
    if (img->format & PNG_FORMAT_FLAG_LINEAR) {
        throw Error(ErrorCode::UnsupportedDepth, origin + ": 16-bit PNG channels are not supported");
    }
    ColorSpace cs;
    const bool has_alpha = (img->format & PNG_FORMAT_FLAG_ALPHA) != 0;
    const bool has_color = (img->format & PNG_FORMAT_FLAG_COLOR) != 0;
    if (has_alpha) {
        cs = ColorSpace::Rgba;
        img->format = PNG_FORMAT_RGBA;
    } else if (has_color) {
        cs = ColorSpace::Rgb;
        img->format = PNG_FORMAT_RGB;
    } else {
        cs = ColorSpace::Gray;
        img->format = PNG_FORMAT_GRAY;
    }
    const int width = static_cast<int>(img->width);
    const int height = static_cast<int>(img->height);
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(*img.get()));
    if (!png_image_finish_read(img.get(), nullptr, data.data(), 0, nullptr)) {
        throw Error(ErrorCode::MalformedInput, origin + ": " + img->message);
    }
    return ImageBuffer(width, height, cs, std::move(data));
}

void check_writable(const ImageBuffer& image, png_image& out) {
    switch (image.colorspace()) {
        case ColorSpace::Gray: out.format = PNG_FORMAT_GRAY; break;
        case ColorSpace::Rgb: out.format = PNG_FORMAT_RGB; break;
        case ColorSpace::Rgba: out.format = PNG_FORMAT_RGBA; break;
        case ColorSpace::Hsv:
            throw Error(ErrorCode::InvalidArgument, "HSV rasters cannot be written as PNG");
    }
    if (image.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cannot write an empty image");
    }
    out.width = static_cast<png_uint_32>(image.width());
    out.height = static_cast<png_uint_32>(image.height());
}

}  // namespace

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
    PngImage img;
    if (!png_image_begin_read_from_memory(img.get(), bytes.data(), bytes.size())) {
        throw Error(ErrorCode::MalformedInput, std::string("<memory>: ") + img->message);
    }
    return finish_read(img, "<memory>");
}

ImageBuffer read_png(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::NotFound, "no such file: " + path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    PngImage img;
    if (!png_image_begin_read_from_memory(img.get(), bytes.data(), bytes.size())) {
        throw Error(ErrorCode::MalformedInput, path.string() + ": " + img->message);
    }
    return finish_read(img, path.string());
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& image, bool fast) {
    PngImage img;
    check_writable(image, *img.get());
    if (fast) img->flags |= PNG_IMAGE_FLAG_FAST;
    png_alloc_size_t size = PNG_IMAGE_PNG_SIZE_MAX(*img.get());
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(img.get(), out.data(), &size, 0, image.data().data(), 0,
                                   nullptr)) {
        throw Error(ErrorCode::Io, std::string("png encode: ") + img->message);
    }
    out.resize(size);
    return out;
}

void write_png(const ImageBuffer& image, const std::filesystem::path& path, bool fast) {
    const auto bytes = encode_png(image, fast);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open for writing: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "write failed: " + path.string());
    }
}

ImageBuffer mask_to_image(const BinaryMask& mask) {
    ImageBuffer out(mask.width(), mask.height(), ColorSpace::Gray);
    const auto src = mask.bits();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
    return out;
}

}  // namespace chromaforge
