#include "textfield/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace textfield {

WeightMap compute_weights(const InstanceMap& labels) {
  std::vector<std::size_t> area;
  for (const auto l : labels.values()) {
    if (l < 0) throw InputError("negative instance label");
    if (l == 0) continue;
    if (static_cast<std::size_t>(l) >= area.size()) area.resize(l + 1, 0);
    ++area[l];
  }
  std::size_t total = 0, instances = 0;
  for (const auto a : area) {
    total += a;
    instances += a > 0;
  }
  WeightMap w(labels.width(), labels.height(), 1.0);
  if (instances == 0) return w;
  const double mass = static_cast<double>(total) / static_cast<double>(instances);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) w[i] = mass / static_cast<double>(area[labels[i]]);
  }
  return w;
}

LossMap per_pixel_loss(const DirectionField& gt, const DirectionField& pred) {
  require_same_shape(gt, pred, "per_pixel_loss");
  LossMap out(gt.width(), gt.height());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double dx = static_cast<double>(gt.vx[i]) - pred.vx[i];
    const double dy = static_cast<double>(gt.vy[i]) - pred.vy[i];
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
  return out;
}

HardNegativeSelection select_hard_negatives(const InstanceMap& labels,
                                            const LossMap& loss_map,
                                            double gamma) {
  require_same_shape(labels, loss_map, "select_hard_negatives");
  if (!(gamma > 0.0)) {
    throw InputError("gamma must be positive, got " + std::to_string(gamma));
  }
  std::size_t text = 0;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) {
      ++text;
    } else {
      negatives.push_back(i);
    }
  }
  const auto budget = static_cast<std::size_t>(
      std::floor(gamma * static_cast<double>(text)));
  const std::size_t keep = std::min(budget, negatives.size());

  auto harder = [&](std::size_t a, std::size_t b) {
    if (loss_map[a] != loss_map[b]) return loss_map[a] > loss_map[b];
    return a < b;
  };
  std::partial_sort(negatives.begin(), negatives.begin() + keep,
                    negatives.end(), harder);
  negatives.resize(keep);
  return {std::move(negatives), gamma};
}

double total_loss(const DirectionField& gt, const DirectionField& pred,
                  const WeightMap& weights, const InstanceMap& labels,
                  const std::optional<HardNegativeSelection>& selection) {
  require_same_shape(gt, pred, "total_loss");
  require_same_shape(gt, weights, "total_loss");
  require_same_shape(gt, labels, "total_loss");
  const LossMap loss = per_pixel_loss(gt, pred);

  std::vector<std::uint8_t> use(gt.size(), selection ? 0 : 1);
  if (selection) {
    for (std::size_t i = 0; i < labels.size(); ++i) use[i] = labels[i] != 0;
    for (const auto i : selection->kept) {
      if (i >= use.size()) throw InputError("selected pixel out of range");
      if (labels[i] != 0) {
        throw InputError("hard negative selection contains a text pixel");
      }
      use[i] = 1;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (use[i]) sum += weights[i] * loss[i];
  }
  return sum;
}

}  // namespace textfield
