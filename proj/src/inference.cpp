#include "textfield/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "textfield/morphology.hpp"

namespace textfield {

void InferenceConfig::validate() const {
  if (!(lambda_m > 0.0 && lambda_m < 1.0)) {
    throw InputError("lambda_m must lie in (0, 1), got " +
                     std::to_string(lambda_m));
  }
  if (!(lambda_r >= 0.0 && lambda_r <= 1.0)) {
    throw InputError("lambda_r must lie in [0, 1], got " +
                     std::to_string(lambda_r));
  }
  if (lambda_a < 0) throw InputError("lambda_a must be non-negative");
  if (k1 <= 0 || k1 % 2 == 0) throw InputError("k1 must be odd and positive");
  if (k2 <= 0 || k2 % 2 == 0) throw InputError("k2 must be odd and positive");
}

InferenceConfig preset_config(Preset preset) {
  InferenceConfig config;
  switch (preset) {
    case Preset::kCtw1500: config.lambda_m = 0.59; break;
    case Preset::kTotalText: config.lambda_m = 0.50; break;
    case Preset::kIc15: config.lambda_m = 0.69; break;
    case Preset::kTd500: config.lambda_m = 0.64; break;
  }
  return config;
}

std::optional<Preset> parse_preset(std::string_view name) {
  if (name == "ctw1500") return Preset::kCtw1500;
  if (name == "totaltext") return Preset::kTotalText;
  if (name == "ic15") return Preset::kIc15;
  if (name == "td500") return Preset::kTd500;
  return std::nullopt;
}

std::string_view preset_name(Preset preset) {
  switch (preset) {
    case Preset::kCtw1500: return "ctw1500";
    case Preset::kTotalText: return "totaltext";
    case Preset::kIc15: return "ic15";
    case Preset::kTd500: return "td500";
  }
  return "unknown";
}

int bin_direction(float vx, float vy) {
  if (vx == 0.0f && vy == 0.0f) {
    throw InputError("cannot bin the zero vector");
  }
  // Angle measured counter-clockwise with y flipped to point up.
  const double angle = std::atan2(-static_cast<double>(vy), vx);
  const double sectors = angle / (std::numbers::pi / 4.0);
  const double lower = std::floor(sectors);
  const double frac = sectors - lower;
  const int lo = ((static_cast<int>(lower) % 8) + 8) % 8;
  const int hi = (lo + 1) % 8;
  if (frac < 0.5) return lo;
  if (frac > 0.5) return hi;
  return std::min(lo, hi);
}

BinaryMask threshold_candidates(const DirectionField& field, double lambda_m) {
  BinaryMask c(field.width(), field.height());
  for (std::size_t i = 0; i < field.size(); ++i) {
    c[i] = vector_magnitude(field.vx[i], field.vy[i]) >= lambda_m;
  }
  return c;
}

SuperpixelForest build_forest(const DirectionField& field,
                              const BinaryMask& candidates, RootRule rule) {
  require_same_shape(field, candidates, "build_forest");
  const int w = field.width(), h = field.height();
  const std::size_t n = field.size();

  SuperpixelForest forest;
  forest.candidates = candidates;
  forest.parent = Grid<std::int32_t>(w, h, SuperpixelForest::kNotCandidate);
  forest.labels = Grid<std::int32_t>(w, h, 0);
  forest.bins = Grid<std::int8_t>(w, h, -1);

  // Binned neighbor of every candidate; -1 when it leaves the domain or the
  // candidate set.
  std::vector<std::int32_t> target(n, -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = field.vx.index(x, y);
      if (!candidates[i]) continue;
      const int b = bin_direction(field.vx[i], field.vy[i]);
      forest.bins[i] = static_cast<std::int8_t>(b);
      const int qx = x + kBinOffsets[b].x, qy = y + kBinOffsets[b].y;
      if (candidates.contains(qx, qy) && candidates(qx, qy)) {
        const std::size_t q = candidates.index(qx, qy);
        const double dot =
            static_cast<double>(field.vx[i]) * field.vx[q] +
            static_cast<double>(field.vy[i]) * field.vy[q];
        if (rule == RootRule::kCandidateOnly || dot >= 0.0) {
          target[i] = static_cast<std::int32_t>(q);
        }
      }
    }
  }

  // Blob labeling: two candidates are linked when either points at the other.
  std::vector<std::int32_t> stack;
  std::int32_t label = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (!candidates[s] || forest.labels[s] != 0) continue;
    ++label;
    forest.labels[s] = label;
    stack.push_back(static_cast<std::int32_t>(s));
    while (!stack.empty()) {
      const std::int32_t p = stack.back();
      stack.pop_back();
      const int px = p % w, py = p / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int qx = px + dx, qy = py + dy;
          if (!candidates.contains(qx, qy)) continue;
          const auto q = static_cast<std::int32_t>(candidates.index(qx, qy));
          if (!candidates[q] || forest.labels[q] != 0) continue;
          if (target[p] == q || target[q] == p) {
            forest.labels[q] = label;
            stack.push_back(q);
          }
        }
      }
    }
  }
  forest.superpixel_count = label;

  // Break cycles of the pointer graph. Each weak component holds at most one
  // cycle; its member earliest in scan order becomes the root.
  std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on path, 2 done
  std::vector<std::int32_t> path;
  for (std::size_t s = 0; s < n; ++s) {
    if (!candidates[s] || state[s] != 0) continue;
    path.clear();
    std::int32_t cur = static_cast<std::int32_t>(s);
    while (cur >= 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = target[cur];
    }
    if (cur >= 0 && state[cur] == 1) {
      const auto start = std::find(path.begin(), path.end(), cur);
      target[*std::min_element(start, path.end())] = -1;
    }
    for (const auto p : path) state[p] = 2;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!candidates[i]) continue;
    forest.parent[i] = target[i] >= 0 ? target[i] : SuperpixelForest::kRoot;
    if (target[i] >= 0) continue;
    forest.representatives.push_back({i, forest.bins[i]});
  }
  return forest;
}

RepresentativeGroups group_representatives(const SuperpixelForest& forest,
                                           int k1) {
  BinaryMask reps(forest.width(), forest.height());
  for (const auto& r : forest.representatives) reps[r.index] = 1;
  auto cc = morph::label_components(morph::dilate(reps, k1));
  RepresentativeGroups groups;
  groups.count = cc.count;
  groups.group_of.reserve(forest.representatives.size());
  for (const auto& r : forest.representatives) {
    groups.group_of.push_back(cc.labels[r.index]);
  }
  groups.components = std::move(cc.labels);
  return groups;
}

std::vector<GroupBalance> filter_unbalanced(const RepresentativeGroups& groups,
                                            const SuperpixelForest& forest,
                                            double lambda_r) {
  if (groups.group_of.size() != forest.representatives.size()) {
    throw InputError("groups do not belong to this forest");
  }
  std::vector<GroupBalance> balance(static_cast<std::size_t>(groups.count) + 1);
  for (std::size_t k = 0; k < forest.representatives.size(); ++k) {
    const auto& rep = forest.representatives[k];
    auto& g = balance[groups.group_of[k]];
    ++g.bin_counts[rep.bin];
    ++g.size;
  }
  for (std::size_t id = 1; id < balance.size(); ++id) {
    auto& g = balance[id];
    for (int b = 0; b < 4; ++b) {
      g.paired += 2 * std::min(g.bin_counts[b], g.bin_counts[b + 4]);
    }
    g.survives = g.size > 0 && static_cast<double>(g.paired) >=
                                   lambda_r * static_cast<double>(g.size);
  }
  return balance;
}

std::int32_t relabel_scan_order(InstanceMap& labels) {
  std::vector<std::int32_t> remap;
  std::int32_t next = 0;
  for (auto& l : labels.values()) {
    if (l <= 0) {
      l = 0;
      continue;
    }
    if (static_cast<std::size_t>(l) >= remap.size()) remap.resize(l + 1, 0);
    if (remap[l] == 0) remap[l] = ++next;
    l = remap[l];
  }
  return next;
}

InferenceTrace run_inference(const DirectionField& field,
                             const InferenceConfig& config) {
  config.validate();
  const int w = field.width(), h = field.height();
  InferenceTrace trace;
  trace.forest = build_forest(
      field, threshold_candidates(field, config.lambda_m), config.root_rule);
  trace.groups = group_representatives(trace.forest, config.k1);
  trace.balance = filter_unbalanced(trace.groups, trace.forest, config.lambda_r);

  const auto& forest = trace.forest;
  std::vector<std::int32_t> superpixel_group(
      static_cast<std::size_t>(forest.superpixel_count) + 1, 0);
  for (std::size_t k = 0; k < forest.representatives.size(); ++k) {
    const auto g = trace.groups.group_of[k];
    if (trace.balance[g].survives) {
      superpixel_group[forest.labels[forest.representatives[k].index]] = g;
    }
  }
  trace.propagated = InstanceMap(w, h);
  for (std::size_t i = 0; i < field.size(); ++i) {
    trace.propagated[i] = superpixel_group[forest.labels[i]];
  }

  // Close each instance on its own bounding box; lower ids win overlaps.
  struct Box {
    int x0, y0, x1, y1;
  };
  const std::int32_t groups = trace.groups.count;
  std::vector<Box> boxes(static_cast<std::size_t>(groups) + 1,
                         Box{w, h, -1, -1});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto id = trace.propagated(x, y);
      if (id == 0) continue;
      Box& b = boxes[id];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
    }
  }
  InstanceMap closed(w, h);
  for (std::int32_t id = 1; id <= groups; ++id) {
    const Box& b = boxes[id];
    if (b.x1 < 0) continue;
    BinaryMask crop(b.x1 - b.x0 + 1, b.y1 - b.y0 + 1);
    for (int y = b.y0; y <= b.y1; ++y) {
      for (int x = b.x0; x <= b.x1; ++x) {
        crop(x - b.x0, y - b.y0) = trace.propagated(x, y) == id;
      }
    }
    crop = morph::close(crop, config.k2);
    for (int y = b.y0; y <= b.y1; ++y) {
      for (int x = b.x0; x <= b.x1; ++x) {
        if (crop(x - b.x0, y - b.y0) && closed(x, y) == 0) closed(x, y) = id;
      }
    }
  }

  std::vector<std::size_t> area(static_cast<std::size_t>(groups) + 1, 0);
  for (const auto l : closed.values()) ++area[l];
  for (auto& l : closed.values()) {
    if (l != 0 && area[l] < static_cast<std::size_t>(config.lambda_a)) l = 0;
  }
  trace.instance_count = relabel_scan_order(closed);
  trace.instances = std::move(closed);
  return trace;
}

InstanceMap detect(const DirectionField& field, const InferenceConfig& config) {
  return run_inference(field, config).instances;
}

}  // namespace textfield
