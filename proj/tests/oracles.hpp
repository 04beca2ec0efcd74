#pragma once
// Test-only reference computations, written independently of the library kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "chromaforge/image.hpp"

namespace oracle {

/// Straight double loop over pixel pairs, direct division by the Euclidean distance.
inline chromaforge::ImageBuffer ace_bruteforce(const chromaforge::ImageBuffer& img, double slope,
                                               std::uint8_t degenerate = 128) {
    using namespace chromaforge;
    const int w = img.width(), h = img.height();
    ImageBuffer out(w, h, ColorSpace::Rgb);
    for (int c = 0; c < 3; ++c) {
        std::vector<double> r(static_cast<std::size_t>(w) * h, 0.0);
        for (int py = 0; py < h; ++py) {
            for (int px = 0; px < w; ++px) {
                double sum = 0.0;
                for (int qy = 0; qy < h; ++qy) {
                    for (int qx = 0; qx < w; ++qx) {
                        if (qx == px && qy == py) continue;
                        const double t = (img.at(px, py, c) - img.at(qx, qy, c)) / 255.0;
                        const double sat = std::max(-1.0, std::min(1.0, slope * t));
                        sum += sat / std::hypot(px - qx, py - qy);
                    }
                }
                r[static_cast<std::size_t>(py) * w + px] = sum;
            }
        }
        const double lo = *std::min_element(r.begin(), r.end());
        const double hi = *std::max_element(r.begin(), r.end());
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double v = r[static_cast<std::size_t>(y) * w + x];
                out.at(x, y, c) = hi == lo ? degenerate
                                           : static_cast<std::uint8_t>(std::floor((v - lo) / (hi - lo) * 255.0 + 0.5));
            }
        }
    }
    return out;
}

inline chromaforge::ImageBuffer random_rgb(int w, int h, std::mt19937_64& rng) {
    chromaforge::ImageBuffer img(w, h, chromaforge::ColorSpace::Rgb);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
    return img;
}

inline chromaforge::BinaryMask random_mask(int w, int h, double density, std::mt19937_64& rng) {
    chromaforge::BinaryMask m(w, h);
    std::bernoulli_distribution b(density);
    for (auto& v : m.bits()) v = b(rng) ? 1 : 0;
    return m;
}

/// A green-screen scene with one foreground shape and its exact ground-truth mask.
struct Scene {
    chromaforge::ImageBuffer image;
    chromaforge::BinaryMask truth;
};

/// Green backdrop with hue jittered inside the default key window; one rectangle or ellipse in a
/// random non-key color, kept at least 4 px from the frame edge.
inline Scene green_scene(int w, int h, std::mt19937_64& rng) {
    using namespace chromaforge;
    Scene s{ImageBuffer(w, h, ColorSpace::Rgb), BinaryMask(w, h)};
    std::uniform_int_distribution<int> hue(70, 100), sat(140, 255), val(110, 250);
    const Hsv bg{static_cast<std::uint8_t>(hue(rng)), static_cast<std::uint8_t>(sat(rng)),
                 static_cast<std::uint8_t>(val(rng))};
    std::uniform_int_distribution<int> jitter(-3, 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Hsv px{static_cast<std::uint8_t>(bg[0] + jitter(rng)), bg[1], bg[2]};
            const Rgb c = hsv_to_rgb(px);
            std::copy(c.begin(), c.end(), s.image.pixel(x, y));
        }
    }
    // Foreground color: hue well outside the key window.
    std::uniform_int_distribution<int> fg_hue(0, 255 - 64);
    int fh = fg_hue(rng);
    if (fh >= 50) fh += 64;  // skip [50, 114)
    const Rgb fg = hsv_to_rgb({static_cast<std::uint8_t>(fh), static_cast<std::uint8_t>(sat(rng)),
                               static_cast<std::uint8_t>(val(rng))});
    std::uniform_int_distribution<int> size_w(12, w / 2), size_h(12, h / 2);
    const int bw = size_w(rng), bh = size_h(rng);
    std::uniform_int_distribution<int> px(4, w - 4 - bw), py(4, h - 4 - bh);
    const int x0 = px(rng), y0 = py(rng);
    const bool ellipse = std::bernoulli_distribution(0.5)(rng);
    const double cx = x0 + (bw - 1) / 2.0, cy = y0 + (bh - 1) / 2.0;
    const double rx = bw / 2.0, ry = bh / 2.0;
    for (int y = y0; y < y0 + bh; ++y) {
        for (int x = x0; x < x0 + bw; ++x) {
            if (ellipse) {
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                if (dx * dx + dy * dy > 1.0) continue;
            }
            std::copy(fg.begin(), fg.end(), s.image.pixel(x, y));
            s.truth.set(x, y, true);
        }
    }
    return s;
}

}  // namespace oracle
