#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chromaforge {

enum class ColorSpace { Gray, Rgb, Rgba, Hsv };

int channels_of(ColorSpace cs);
const char* to_string(ColorSpace cs);

/// Row-major interleaved 8-bit raster.
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, ColorSpace cs, std::uint8_t fill = 0);
    ImageBuffer(int width, int height, ColorSpace cs, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    ColorSpace colorspace() const noexcept { return cs_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return pixel_count() == 0; }

    std::uint8_t& at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t* pixel(int x, int y) {
        return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * channels_;
    }
    const std::uint8_t* pixel(int x, int y) const {
        return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * channels_;
    }

    std::span<std::uint8_t> data() noexcept { return data_; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

    bool operator==(const ImageBuffer&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    ColorSpace cs_ = ColorSpace::Rgb;
    std::vector<std::uint8_t> data_;
};

/// Axis-aligned pixel rectangle; (x, y) is the top-left corner.
struct PixelBox {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const noexcept { return x + w; }
    int bottom() const noexcept { return y + h; }
    long long area() const noexcept { return static_cast<long long>(w) * h; }
    bool fits(int width, int height) const noexcept {
        return w >= 1 && h >= 1 && x >= 0 && y >= 0 && right() <= width && bottom() <= height;
    }
    bool operator==(const PixelBox&) const = default;
};

double iou(const PixelBox& a, const PixelBox& b);

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    std::span<std::uint8_t> bits() noexcept { return bits_; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    std::size_t count() const;
    bool any() const;
    /// Tight box around the 1-pixels; w = h = 0 when empty.
    PixelBox bounding_box() const;
    BinaryMask crop(const PixelBox& box) const;

    bool operator==(const BinaryMask&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

double iou(const BinaryMask& a, const BinaryMask& b);

using Rgb = std::array<std::uint8_t, 3>;
using Hsv = std::array<std::uint8_t, 3>;

/// Hexcone HSV with hue scaled to 0-255 over the full circle. Hue is 0 for grays.
Hsv rgb_to_hsv(Rgb px);
Rgb hsv_to_rgb(Hsv px);

ImageBuffer to_hsv(const ImageBuffer& rgb);
/// Converts GRAY/RGBA/HSV to RGB (alpha dropped).
ImageBuffer to_rgb(const ImageBuffer& img);
ImageBuffer crop(const ImageBuffer& img, const PixelBox& box);
/// Nearest-neighbour resample to exactly (width, height).
ImageBuffer resize_nearest(const ImageBuffer& img, int width, int height);
BinaryMask resize_nearest(const BinaryMask& mask, int width, int height);

}  // namespace chromaforge
