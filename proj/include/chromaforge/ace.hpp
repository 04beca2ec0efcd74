#pragma once

#include <cstdint>

#include "chromaforge/image.hpp"

namespace chromaforge {

/// Automatic Color Equalization parameters (linear-clipped saturation variant).
struct AceParams {
    double slope = 10.0;
    /// Comparison pixels per target pixel; 0 means all other pixels.
    int samples = 500;
    std::uint64_t seed = 0;
    /// Output value for a channel whose adjusted response is flat.
    std::uint8_t degenerate_value = 128;

    /// Throws InvalidArgument unless slope > 0 and samples is 0 or >= 8.
    void validate() const;
};

// Each channel is processed independently in two stages:
//
//   R(p) = sum_{j != p} clamp(slope * (I(p) - I(j)) / 255, -1, 1) / |p - j|
//   out(p) = round_half_up(255 * (R(p) - min R) / (max R - min R))
//
// with |p - j| the Euclidean pixel distance. A flat R yields degenerate_value everywhere.
// ace_sampled restricts the sum to `samples` comparison pixels and rescales it by
// (N - 1) / samples. The comparison set of pixel p is {(p + o) mod N : o in O}, where O is a
// seeded draw of distinct offsets from [1, N - 1]; with samples >= N - 1 it is the full set
// and the result is bit-identical to ace_exhaustive. Sums run in ascending j order, so
// results do not depend on the thread schedule.

/// O(N^2) per channel. Rejects non-RGB input.
ImageBuffer ace_exhaustive(const ImageBuffer& image, const AceParams& params);
/// Requires params.samples >= 8. Rejects non-RGB input.
ImageBuffer ace_sampled(const ImageBuffer& image, const AceParams& params);
/// Dispatches on params.samples (0 = exhaustive).
ImageBuffer ace(const ImageBuffer& image, const AceParams& params);

namespace serial {
ImageBuffer ace_exhaustive(const ImageBuffer& image, const AceParams& params);
ImageBuffer ace_sampled(const ImageBuffer& image, const AceParams& params);
}  // namespace serial

}  // namespace chromaforge
