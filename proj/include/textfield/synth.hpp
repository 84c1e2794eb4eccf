#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "textfield/field.hpp"
#include "textfield/geometry.hpp"

namespace textfield {

enum class ShapeFamily { kAxisBar, kRotatedBar, kArcRibbon, kMixed };

std::optional<ShapeFamily> parse_shape_family(std::string_view name);
std::string_view shape_family_name(ShapeFamily family);

/// Parameters of one synthetic scene. Lengths are in pixels.
struct SynthSpec {
  std::uint64_t seed = 1;
  int width = 320;
  int height = 240;
  int count_min = 2;
  int count_max = 6;
  ShapeFamily shape = ShapeFamily::kMixed;
  double stroke_min = 12.0;
  double stroke_max = 24.0;
  double length_min = 50.0;
  double length_max = 140.0;
  /// Minimum number of background pixels between instances (Chebyshev).
  int min_gap = 3;
  /// Vertices keep this distance from the image border.
  int margin = 4;
  /// Instances rasterizing to fewer pixels are redrawn.
  int min_area = 400;
  /// Draws per instance before the packing is declared infeasible.
  int max_attempts = 400;

  void validate() const;
};

/// Text-like polygons with integer vertices. Deterministic in the seed.
/// Throws InputError when an instance cannot be placed.
PolygonScene generate_scene(const SynthSpec& spec);

/// Perturbation applied to nonzero vectors of a field.
struct NoiseModel {
  double angle_sigma = 0.0;      ///< degrees
  double magnitude_sigma = 0.0;  ///< relative
  double dropout_rate = 0.0;     ///< probability of zeroing a vector
  std::uint64_t seed = 0;

  void validate() const;
};

/// Rotates, rescales and drops vectors independently per pixel. Draws depend
/// only on the seed and pixel index.
DirectionField perturb_field(const DirectionField& field,
                             const NoiseModel& noise);

}  // namespace textfield
