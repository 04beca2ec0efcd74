#pragma once

#include <vector>

#include "chromaforge/image.hpp"

namespace chromaforge {

enum class MorphOp { Erode, Dilate, Open, Close };

/// Binary morphology with a (2r+1)x(2r+1) square element. Out-of-frame pixels never
/// influence the result: erosion and dilation both see only the in-frame part of the window,
/// so a full mask is a fixed point of every op. Throws InvalidArgument when radius < 1.
BinaryMask morphology(const BinaryMask& mask, MorphOp op, int radius);

struct Component {
    int id = 0;
    std::size_t count = 0;
    PixelBox box;
};

/// Components in raster order of their first pixel; ids are 1-based.
std::vector<Component> connected_components(const BinaryMask& mask, int connectivity);

/// Same labelling as connected_components; 0 marks background.
std::vector<int> label_components(const BinaryMask& mask, int connectivity);

/// Keeps only the component with the most pixels (earliest in raster order on ties).
BinaryMask keep_largest_component(const BinaryMask& mask, int connectivity);

namespace serial {
/// Direct window scan; reference for the separable parallel kernel.
BinaryMask morphology(const BinaryMask& mask, MorphOp op, int radius);
}  // namespace serial

}  // namespace chromaforge
