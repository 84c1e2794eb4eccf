#pragma once

#include <vector>

#include "textfield/geometry.hpp"
#include "textfield/grid.hpp"

namespace textfield {

/// Outer boundary of the 8-connected component containing the first pixel
/// (scan order) of `label`, traced along pixel edges. Vertices sit on pixel
/// corners and collinear runs are merged, so rasterizing the polygon gives
/// back the component minus its holes. Pixels touching only diagonally are
/// bridged by the background pixel earlier in scan order so the polygon stays
/// simple. Empty when the label is absent.
std::vector<Point> trace_outer_contour(const InstanceMap& labels,
                                       std::int32_t label);

/// One polygon per instance label 1..max, skipping absent labels.
std::vector<Polygon> instance_contours(const InstanceMap& labels);

}  // namespace textfield
