#include "chromaforge/ace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "chromaforge/error.hpp"
#include "chromaforge/parallel.hpp"
#include "sampling.hpp"

namespace chromaforge {

void AceParams::validate() const {
    if (!(slope > 0.0) || !std::isfinite(slope)) {
        throw Error(ErrorCode::InvalidArgument, "ACE slope must be > 0");
    }
    if (samples != 0 && samples < 8) {
        throw Error(ErrorCode::InvalidArgument,
                    "ACE samples must be 0 (exhaustive) or >= 8, got " + std::to_string(samples));
    }
}

namespace {

struct Offset {
    int dx;  // o % width
    int dy;  // o / width
    std::size_t linear;
};

class AceKernel {
public:
    AceKernel(const ImageBuffer& image, const AceParams& params, std::vector<std::size_t> offsets)
        : img_(image), params_(params) {
        const int w = image.width();
        const int h = image.height();
        n_ = image.pixel_count();
        offsets_.reserve(offsets.size());
        for (const std::size_t o : offsets) {
            offsets_.push_back({static_cast<int>(o % w), static_cast<int>(o / w), o});
        }
        scale_ = offsets.empty() ? 1.0
                                 : static_cast<double>(n_ - 1) / static_cast<double>(offsets.size());
        inv_dist_.assign(static_cast<std::size_t>(w) * h, 0.0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (x == 0 && y == 0) continue;
                inv_dist_[static_cast<std::size_t>(y) * w + x] =
                    1.0 / std::sqrt(static_cast<double>(x) * x + static_cast<double>(y) * y);
            }
        }
        for (int d = -255; d <= 255; ++d) {
            saturation_[d + 255] = std::clamp(params.slope * d / 255.0, -1.0, 1.0);
        }
        for (auto& r : response_) r.assign(n_, 0.0);
    }

    // Stage 1 for pixel p: ascending-j accumulation over the comparison set.
    void accumulate(std::size_t p) {
        const int w = img_.width();
        const int h = img_.height();
        const int px = static_cast<int>(p % w);
        const int py = static_cast<int>(p / w);
        const std::uint8_t* src = img_.data().data();
        const int ip[3] = {src[3 * p], src[3 * p + 1], src[3 * p + 2]};
        double acc[3] = {0.0, 0.0, 0.0};

        auto term = [&](const Offset& o, bool wrapped) {
            int jx = px + o.dx;
            int jy = py + o.dy;
            if (jx >= w) {
                jx -= w;
                ++jy;
            }
            if (wrapped) jy -= h;
            const std::size_t j = static_cast<std::size_t>(jy) * w + jx;
            const double inv = inv_dist_[static_cast<std::size_t>(std::abs(jy - py)) * w +
                                         static_cast<std::size_t>(std::abs(jx - px))];
            for (int c = 0; c < 3; ++c) {
                acc[c] += saturation_[ip[c] - src[3 * j + c] + 255] * inv;
            }
        };

        // Offsets o >= N - p wrap to j = p + o - N, which precede p + o' for every o' < N - p.
        const auto split = std::lower_bound(
            offsets_.begin(), offsets_.end(), n_ - p,
            [](const Offset& o, std::size_t v) { return o.linear < v; });
        for (auto it = split; it != offsets_.end(); ++it) term(*it, true);
        for (auto it = offsets_.begin(); it != split; ++it) term(*it, false);
        for (int c = 0; c < 3; ++c) response_[c][p] = acc[c] * scale_;
    }

    ImageBuffer tone_map() const {
        ImageBuffer out(img_.width(), img_.height(), ColorSpace::Rgb);
        auto dst = out.data();
        for (int c = 0; c < 3; ++c) {
            const auto& r = response_[c];
            const auto [lo_it, hi_it] = std::minmax_element(r.begin(), r.end());
            const double lo = *lo_it;
            const double hi = *hi_it;
            for (std::size_t p = 0; p < n_; ++p) {
                std::uint8_t v;
                if (hi == lo) {
                    v = params_.degenerate_value;
                } else {
                    const double t = std::floor((r[p] - lo) / (hi - lo) * 255.0 + 0.5);
                    v = static_cast<std::uint8_t>(std::clamp(t, 0.0, 255.0));
                }
                dst[3 * p + c] = v;
            }
        }
        return out;
    }

    std::size_t size() const { return n_; }

private:
    const ImageBuffer& img_;
    const AceParams& params_;
    std::size_t n_ = 0;
    std::vector<Offset> offsets_;
    double scale_ = 1.0;
    std::vector<double> inv_dist_;
    std::array<double, 511> saturation_{};
    std::array<std::vector<double>, 3> response_;
};

void check_input(const ImageBuffer& image, const AceParams& params) {
    params.validate();
    if (image.colorspace() != ColorSpace::Rgb) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("ACE expects an RGB image, got ") + to_string(image.colorspace()));
    }
}

std::vector<std::size_t> all_offsets(std::size_t n) {
    std::vector<std::size_t> o(n > 0 ? n - 1 : 0);
    std::iota(o.begin(), o.end(), std::size_t{1});
    return o;
}

std::vector<std::size_t> sampled_offsets(std::size_t n, const AceParams& params) {
    if (params.samples < 8) {
        throw Error(ErrorCode::InvalidArgument, "ace_sampled requires samples >= 8");
    }
    const auto k = static_cast<std::size_t>(params.samples);
    if (n == 0 || k >= n - 1) return all_offsets(n);
    std::mt19937_64 rng(params.seed);
    return detail::select_ascending<std::size_t>(1, n - 1, k, rng);
}

ImageBuffer run_parallel(const ImageBuffer& image, const AceParams& params,
                         std::vector<std::size_t> offsets) {
    if (image.empty()) return image;
    AceKernel kernel(image, params, std::move(offsets));
    const auto n = static_cast<std::ptrdiff_t>(kernel.size());
#pragma omp parallel for schedule(dynamic, 256) num_threads(thread_count())
    for (std::ptrdiff_t p = 0; p < n; ++p) kernel.accumulate(static_cast<std::size_t>(p));
    return kernel.tone_map();
}

ImageBuffer run_serial(const ImageBuffer& image, const AceParams& params,
                       std::vector<std::size_t> offsets) {
    if (image.empty()) return image;
    AceKernel kernel(image, params, std::move(offsets));
    for (std::size_t p = 0; p < kernel.size(); ++p) kernel.accumulate(p);
    return kernel.tone_map();
}

}  // namespace

ImageBuffer ace_exhaustive(const ImageBuffer& image, const AceParams& params) {
    check_input(image, params);
    return run_parallel(image, params, all_offsets(image.pixel_count()));
}

ImageBuffer ace_sampled(const ImageBuffer& image, const AceParams& params) {
    check_input(image, params);
    return run_parallel(image, params, sampled_offsets(image.pixel_count(), params));
}

ImageBuffer ace(const ImageBuffer& image, const AceParams& params) {
    return params.samples == 0 ? ace_exhaustive(image, params) : ace_sampled(image, params);
}

namespace serial {

ImageBuffer ace_exhaustive(const ImageBuffer& image, const AceParams& params) {
    check_input(image, params);
    return run_serial(image, params, all_offsets(image.pixel_count()));
}

ImageBuffer ace_sampled(const ImageBuffer& image, const AceParams& params) {
    check_input(image, params);
    return run_serial(image, params, sampled_offsets(image.pixel_count(), params));
}

}  // namespace serial
}  // namespace chromaforge
