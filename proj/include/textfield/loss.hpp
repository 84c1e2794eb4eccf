#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "textfield/field.hpp"
#include "textfield/grid.hpp"

namespace textfield {

/// Instance-balanced per-pixel weights: 1 on background, sum|T| / (N |T_p|)
/// on text so every instance carries the same total mass.
using WeightMap = Grid<double>;
/// Per-pixel loss values.
using LossMap = Grid<double>;

WeightMap compute_weights(const InstanceMap& labels);

/// Unsquared L2 norm of gt - pred at every pixel.
LossMap per_pixel_loss(const DirectionField& gt, const DirectionField& pred);

/// Non-text pixels retained by hard negative mining.
struct HardNegativeSelection {
  /// Row-major pixel indices, ordered by decreasing loss.
  std::vector<std::size_t> kept;
  double gamma = 0.0;
};

/// Keeps the floor(gamma * text pixels) non-text pixels with the largest
/// loss; ties at the cut go to the earlier pixel in scan order.
HardNegativeSelection select_hard_negatives(const InstanceMap& labels,
                                            const LossMap& loss_map,
                                            double gamma);

/// Sum of w(p) * loss(p) over all text pixels plus the selected non-text
/// pixels. With no selection every pixel of the domain contributes. The
/// reduction runs in scan order.
double total_loss(const DirectionField& gt, const DirectionField& pred,
                  const WeightMap& weights, const InstanceMap& labels,
                  const std::optional<HardNegativeSelection>& selection);

}  // namespace textfield
