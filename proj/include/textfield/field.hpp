#pragma once

#include <cstdint>

#include "textfield/grid.hpp"

namespace textfield {

/// Per-pixel 2-D vector map in the x-right / y-down frame.
struct DirectionField {
  Grid<float> vx;
  Grid<float> vy;

  DirectionField() = default;
  DirectionField(int width, int height) : vx(width, height), vy(width, height) {}

  int width() const { return vx.width(); }
  int height() const { return vx.height(); }
  std::size_t size() const { return vx.size(); }

  friend bool operator==(const DirectionField&, const DirectionField&) = default;
};

/// How pixels outside the image domain are treated by the feature transform.
enum class Border {
  /// A one-pixel virtual ring of background surrounds the image.
  kBackground,
  /// Only in-image background pixels are sites.
  kText,
};

/// Nearest background site of every text pixel. `nearest` may point into the
/// virtual ring (x = -1 or width, y = -1 or height) under Border::kBackground.
struct FeatureTransform {
  BinaryMask text;
  Grid<Pixel> nearest;
  /// Squared Euclidean distance to `nearest`; 0 on background pixels.
  Grid<std::int64_t> sq_distance;

  int width() const { return text.width(); }
  int height() const { return text.height(); }
};

/// Exact Euclidean feature transform of the union mask: background pixels
/// are the sites. Among equidistant sites the one with lowest y, then
/// lowest x, is chosen. Throws InputError("no background sites") when the
/// mask has text but no site exists.
FeatureTransform feature_transform(const BinaryMask& mask,
                                   Border border = Border::kBackground);

/// Per-instance feature transform: for a pixel of instance k, every pixel not
/// labelled k is a site, so touching instances act as background for each
/// other.
FeatureTransform feature_transform(const InstanceMap& labels,
                                   Border border = Border::kBackground);

/// Ground-truth direction field: unit vector from the nearest site toward the
/// pixel on text, (0, 0) elsewhere. Float components are adjusted so that
/// magnitude() is exactly 1 on text.
DirectionField generate_field(const FeatureTransform& ft);
DirectionField generate_field(const BinaryMask& mask,
                              Border border = Border::kBackground);
DirectionField generate_field(const InstanceMap& labels,
                              Border border = Border::kBackground);

/// Euclidean norm of one vector, evaluated in double and rounded to float.
float vector_magnitude(float vx, float vy);

/// Adjusts the vector by single-ulp steps so vector_magnitude() equals
/// `target`. Returns false, leaving the magnitude just below target, when no
/// nearby float pair hits it exactly.
bool fit_magnitude(float& vx, float& vy, float target);

ScalarMap magnitude(const DirectionField& field);

}  // namespace textfield
