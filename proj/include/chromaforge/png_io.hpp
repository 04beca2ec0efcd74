#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "chromaforge/image.hpp"

namespace chromaforge {

/// Reads an 8-bit PNG. Gray, RGB and RGBA are kept as-is; palette images expand to RGB(A),
/// gray+alpha expands to RGBA.
///
/// Throws Error with NotFound (missing file), MalformedInput (not a PNG or truncated),
/// UnsupportedDepth (16-bit channels).
ImageBuffer read_png(const std::filesystem::path& path);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);

/// Writes GRAY, RGB or RGBA. HSV rasters are rejected. `fast` trades size for encode speed;
/// output is deterministic for a given raster and flag.
void write_png(const ImageBuffer& image, const std::filesystem::path& path, bool fast = false);
std::vector<std::uint8_t> encode_png(const ImageBuffer& image, bool fast = false);

ImageBuffer mask_to_image(const BinaryMask& mask);

}  // namespace chromaforge
