#pragma once

#include <cstdint>

#include "textfield/grid.hpp"

namespace textfield::morph {

/// Binary dilation by a side x side square. Pixels outside the image are 0.
BinaryMask dilate(const BinaryMask& mask, int side);

/// Binary erosion by a side x side square. Pixels outside the image are 0,
/// so foreground touching the border erodes.
BinaryMask erode(const BinaryMask& mask, int side);

/// Closing (dilate then erode) evaluated on an unbounded background plane
/// and clipped back to the image, so the result always contains the input.
BinaryMask close(const BinaryMask& mask, int side);

/// 8-connected component labeling. Labels are 1..count in scan order of
/// each component's first pixel.
struct Components {
  InstanceMap labels;
  std::int32_t count = 0;
};
Components label_components(const BinaryMask& mask);

}  // namespace textfield::morph
