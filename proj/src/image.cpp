#include "chromaforge/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chromaforge/error.hpp"

namespace chromaforge {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::NotFound: return "not-found";
        case ErrorCode::Io: return "io";
        case ErrorCode::MalformedInput: return "malformed-input";
        case ErrorCode::UnsupportedDepth: return "unsupported-depth";
        case ErrorCode::NoObject: return "no-object";
        case ErrorCode::Placement: return "placement";
        case ErrorCode::Config: return "config";
    }
    return "unknown";
}

int channels_of(ColorSpace cs) {
    switch (cs) {
        case ColorSpace::Gray: return 1;
        case ColorSpace::Rgb:
        case ColorSpace::Hsv: return 3;
        case ColorSpace::Rgba: return 4;
    }
    return 0;
}

const char* to_string(ColorSpace cs) {
    switch (cs) {
        case ColorSpace::Gray: return "GRAY";
        case ColorSpace::Rgb: return "RGB";
        case ColorSpace::Rgba: return "RGBA";
        case ColorSpace::Hsv: return "HSV";
    }
    return "?";
}

ImageBuffer::ImageBuffer(int width, int height, ColorSpace cs, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels_of(cs)), cs_(cs) {
    if (width < 0 || height < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
    }
    data_.assign(pixel_count() * channels_, fill);
}

ImageBuffer::ImageBuffer(int width, int height, ColorSpace cs, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels_of(cs)), cs_(cs), data_(std::move(data)) {
    if (width < 0 || height < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
    }
    if (data_.size() != pixel_count() * channels_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "sample buffer length " + std::to_string(data_.size()) + " does not match " +
                        std::to_string(width) + "x" + std::to_string(height) + "x" +
                        std::to_string(channels_));
    }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative mask dimensions");
    }
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::any() const {
    return std::find(bits_.begin(), bits_.end(), std::uint8_t{1}) != bits_.end();
}

PixelBox BinaryMask::bounding_box() const {
    int x0 = width_, y0 = height_, x1 = -1, y1 = -1;
    for (int y = 0; y < height_; ++y) {
        const std::uint8_t* row = bits_.data() + static_cast<std::size_t>(y) * width_;
        for (int x = 0; x < width_; ++x) {
            if (row[x]) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = y;
            }
        }
    }
    if (x1 < 0) return {};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

BinaryMask BinaryMask::crop(const PixelBox& box) const {
    if (!box.fits(width_, height_)) {
        throw Error(ErrorCode::InvalidArgument, "crop box outside mask");
    }
    BinaryMask out(box.w, box.h);
    for (int y = 0; y < box.h; ++y) {
        for (int x = 0; x < box.w; ++x) out.set(x, y, get(box.x + x, box.y + y));
    }
    return out;
}

double iou(const PixelBox& a, const PixelBox& b) {
    const int ix0 = std::max(a.x, b.x);
    const int iy0 = std::max(a.y, b.y);
    const int ix1 = std::min(a.right(), b.right());
    const int iy1 = std::min(a.bottom(), b.bottom());
    const long long inter =
        (ix1 > ix0 && iy1 > iy0) ? static_cast<long long>(ix1 - ix0) * (iy1 - iy0) : 0;
    const long long uni = a.area() + b.area() - inter;
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw Error(ErrorCode::DimensionMismatch, "iou of masks with different sizes");
    }
    std::size_t inter = 0, uni = 0;
    const auto ab = a.bits();
    const auto bb = b.bits();
    for (std::size_t i = 0; i < ab.size(); ++i) {
        inter += (ab[i] & bb[i]);
        uni += (ab[i] | bb[i]);
    }
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

Hsv rgb_to_hsv(Rgb px) {
    const int r = px[0], g = px[1], b = px[2];
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    const int chroma = mx - mn;
    if (mx == 0 || chroma == 0) {
        return {0, 0, static_cast<std::uint8_t>(mx)};
    }
    double deg;
    if (mx == r) {
        deg = 60.0 * static_cast<double>(g - b) / chroma;
        if (deg < 0.0) deg += 360.0;
    } else if (mx == g) {
        deg = 60.0 * static_cast<double>(b - r) / chroma + 120.0;
    } else {
        deg = 60.0 * static_cast<double>(r - g) / chroma + 240.0;
    }
    const auto h = static_cast<int>(std::lround(deg * 255.0 / 360.0));
    const auto s = static_cast<int>(std::lround(255.0 * chroma / mx));
    return {static_cast<std::uint8_t>(std::min(h, 255)), static_cast<std::uint8_t>(s),
            static_cast<std::uint8_t>(mx)};
}

Rgb hsv_to_rgb(Hsv px) {
    const double v = px[2] / 255.0;
    const double s = px[1] / 255.0;
    const double deg = px[0] * 360.0 / 255.0;
    const double c = v * s;
    const double hp = std::fmod(deg / 60.0, 6.0);
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    auto q = [](double f) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(f * 255.0), 0L, 255L));
    };
    return {q(r + m), q(g + m), q(b + m)};
}

ImageBuffer to_hsv(const ImageBuffer& rgb) {
    if (rgb.colorspace() != ColorSpace::Rgb) {
        throw Error(ErrorCode::InvalidArgument, "to_hsv expects RGB input");
    }
    ImageBuffer out(rgb.width(), rgb.height(), ColorSpace::Hsv);
    const auto src = rgb.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const Hsv h = rgb_to_hsv({src[i], src[i + 1], src[i + 2]});
        dst[i] = h[0];
        dst[i + 1] = h[1];
        dst[i + 2] = h[2];
    }
    return out;
}

ImageBuffer to_rgb(const ImageBuffer& img) {
    ImageBuffer out(img.width(), img.height(), ColorSpace::Rgb);
    const auto src = img.data();
    auto dst = out.data();
    const std::size_t n = img.pixel_count();
    switch (img.colorspace()) {
        case ColorSpace::Rgb:
            return img;
        case ColorSpace::Gray:
            for (std::size_t i = 0; i < n; ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
            break;
        case ColorSpace::Rgba:
            for (std::size_t i = 0; i < n; ++i) {
                dst[3 * i] = src[4 * i];
                dst[3 * i + 1] = src[4 * i + 1];
                dst[3 * i + 2] = src[4 * i + 2];
            }
            break;
        case ColorSpace::Hsv:
            for (std::size_t i = 0; i < n; ++i) {
                const Rgb c = hsv_to_rgb({src[3 * i], src[3 * i + 1], src[3 * i + 2]});
                dst[3 * i] = c[0];
                dst[3 * i + 1] = c[1];
                dst[3 * i + 2] = c[2];
            }
            break;
    }
    return out;
}

ImageBuffer crop(const ImageBuffer& img, const PixelBox& box) {
    if (!box.fits(img.width(), img.height())) {
        throw Error(ErrorCode::InvalidArgument, "crop box outside image");
    }
    ImageBuffer out(box.w, box.h, img.colorspace());
    const std::size_t row_bytes = static_cast<std::size_t>(box.w) * img.channels();
    for (int y = 0; y < box.h; ++y) {
        std::copy_n(img.pixel(box.x, box.y + y), row_bytes, out.pixel(0, y));
    }
    return out;
}

namespace {

// Source index for destination index i under nearest-neighbour sampling (pixel centres).
int nearest_src(int i, int dst_len, int src_len) {
    const long long s = (2LL * i + 1) * src_len / (2LL * dst_len);
    return static_cast<int>(std::min<long long>(s, src_len - 1));
}

}  // namespace

ImageBuffer resize_nearest(const ImageBuffer& img, int width, int height) {
    if (width < 1 || height < 1 || img.empty()) {
        throw Error(ErrorCode::InvalidArgument, "resize to empty size");
    }
    if (width == img.width() && height == img.height()) return img;
    ImageBuffer out(width, height, img.colorspace());
    const int ch = img.channels();
    for (int y = 0; y < height; ++y) {
        const int sy = nearest_src(y, height, img.height());
        for (int x = 0; x < width; ++x) {
            const int sx = nearest_src(x, width, img.width());
            std::copy_n(img.pixel(sx, sy), ch, out.pixel(x, y));
        }
    }
    return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int width, int height) {
    if (width < 1 || height < 1 || mask.size() == 0) {
        throw Error(ErrorCode::InvalidArgument, "resize to empty size");
    }
    if (width == mask.width() && height == mask.height()) return mask;
    BinaryMask out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = nearest_src(y, height, mask.height());
        for (int x = 0; x < width; ++x) {
            out.set(x, y, mask.get(nearest_src(x, width, mask.width()), sy));
        }
    }
    return out;
}

}  // namespace chromaforge
