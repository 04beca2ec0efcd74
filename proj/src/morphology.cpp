#include "chromaforge/morphology.hpp"

#include <algorithm>
#include <string>

#include "chromaforge/error.hpp"
#include "chromaforge/parallel.hpp"

namespace chromaforge {
namespace {

void check_radius(int radius) {
    if (radius < 1) {
        throw Error(ErrorCode::InvalidArgument,
                    "morphology radius must be >= 1, got " + std::to_string(radius));
    }
}

// One separable pass along rows (horizontal) or columns. Erosion keeps a pixel iff every
// in-frame pixel of the 1-D window is set; dilation iff any is.
BinaryMask pass(const BinaryMask& in, int radius, bool erode, bool horizontal) {
    const int w = in.width();
    const int h = in.height();
    BinaryMask out(w, h);
    const int lines = horizontal ? h : w;
    const int len = horizontal ? w : h;
    const auto src = in.bits();
    auto dst = out.bits();
    const std::ptrdiff_t stride = horizontal ? 1 : w;
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int line = 0; line < lines; ++line) {
        const std::ptrdiff_t base = horizontal ? static_cast<std::ptrdiff_t>(line) * w : line;
        std::vector<int> prefix(static_cast<std::size_t>(len) + 1, 0);
        for (int i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + src[base + i * stride];
        for (int i = 0; i < len; ++i) {
            const int lo = std::max(0, i - radius);
            const int hi = std::min(len - 1, i + radius);
            const int ones = prefix[hi + 1] - prefix[lo];
            const bool v = erode ? ones == hi - lo + 1 : ones > 0;
            dst[base + i * stride] = v ? 1 : 0;
        }
    }
    return out;
}

BinaryMask erode_dilate(const BinaryMask& m, int radius, bool erode) {
    return pass(pass(m, radius, erode, true), radius, erode, false);
}

BinaryMask window_scan(const BinaryMask& m, int radius, bool erode) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            bool all = true, any = false;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= m.width() || yy >= m.height()) continue;
                    const bool b = m.get(xx, yy);
                    all = all && b;
                    any = any || b;
                }
            }
            out.set(x, y, erode ? all : any);
        }
    }
    return out;
}

template <typename Prim>
BinaryMask apply(const BinaryMask& mask, MorphOp op, int radius, Prim prim) {
    check_radius(radius);
    switch (op) {
        case MorphOp::Erode: return prim(mask, radius, true);
        case MorphOp::Dilate: return prim(mask, radius, false);
        case MorphOp::Open: return prim(prim(mask, radius, true), radius, false);
        case MorphOp::Close: return prim(prim(mask, radius, false), radius, true);
    }
    return mask;
}

}  // namespace

BinaryMask morphology(const BinaryMask& mask, MorphOp op, int radius) {
    return apply(mask, op, radius, erode_dilate);
}

namespace serial {
BinaryMask morphology(const BinaryMask& mask, MorphOp op, int radius) {
    return apply(mask, op, radius, window_scan);
}
}  // namespace serial

std::vector<int> label_components(const BinaryMask& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8) {
        throw Error(ErrorCode::InvalidArgument, "connectivity must be 4 or 8");
    }
    const int w = mask.width();
    const int h = mask.height();
    std::vector<int> labels(mask.size(), 0);
    std::vector<int> stack;
    int next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.bits()[idx] || labels[idx] != 0) continue;
            ++next;
            labels[idx] = next;
            stack.assign(1, static_cast<int>(idx));
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int cx = cur % w, cy = cur / w;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == 4 && dx != 0 && dy != 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.bits()[n] && labels[n] == 0) {
                            labels[n] = next;
                            stack.push_back(static_cast<int>(n));
                        }
                    }
                }
            }
        }
    }
    return labels;
}

std::vector<Component> connected_components(const BinaryMask& mask, int connectivity) {
    const auto labels = label_components(mask, connectivity);
    const int w = mask.width();
    std::vector<Component> comps;
    std::vector<int> x0, y0, x1, y1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int l = labels[i];
        if (l == 0) continue;
        const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
        if (static_cast<std::size_t>(l) > comps.size()) {
            comps.push_back({l, 0, {}});
            x0.push_back(x); x1.push_back(x); y0.push_back(y); y1.push_back(y);
        }
        const std::size_t k = static_cast<std::size_t>(l) - 1;
        ++comps[k].count;
        x0[k] = std::min(x0[k], x);
        x1[k] = std::max(x1[k], x);
        y1[k] = std::max(y1[k], y);
    }
    for (std::size_t k = 0; k < comps.size(); ++k) {
        comps[k].box = {x0[k], y0[k], x1[k] - x0[k] + 1, y1[k] - y0[k] + 1};
    }
    return comps;
}

BinaryMask keep_largest_component(const BinaryMask& mask, int connectivity) {
    const auto labels = label_components(mask, connectivity);
    std::vector<std::size_t> counts;
    for (const int l : labels) {
        if (l == 0) continue;
        if (static_cast<std::size_t>(l) > counts.size()) counts.resize(l, 0);
        ++counts[l - 1];
    }
    BinaryMask out(mask.width(), mask.height());
    if (counts.empty()) return out;
    const int best = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin()) + 1;
    auto dst = out.bits();
    for (std::size_t i = 0; i < labels.size(); ++i) dst[i] = labels[i] == best ? 1 : 0;
    return out;
}

}  // namespace chromaforge
