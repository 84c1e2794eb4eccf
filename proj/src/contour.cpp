#include "textfield/contour.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace textfield {
namespace {

// Headings in the y-down frame: east, south, west, north.
constexpr std::array<Pixel, 4> kStep = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

}  // namespace

namespace {

// Corners of the outer boundary walk of the region containing (sx, sy), or
// the first corner visited twice when two region pixels touch only
// diagonally there.
struct Walk {
  std::vector<Point> corners;
  std::optional<Pixel> pinch;
};

Walk walk_boundary(const BinaryMask& region, int sx, int sy) {
  auto in = [&](int x, int y) { return region.contains(x, y) && region(x, y); };
  // Walk corners with the region on the right-hand side. At corner (cx, cy)
  // heading d, the pixels ahead-left and ahead-right decide the turn.
  auto ahead = [&](int cx, int cy, int d, bool left) -> bool {
    switch (d) {
      case 0: return left ? in(cx, cy - 1) : in(cx, cy);
      case 1: return left ? in(cx, cy) : in(cx - 1, cy);
      case 2: return left ? in(cx - 1, cy) : in(cx - 1, cy - 1);
      default: return left ? in(cx - 1, cy - 1) : in(cx, cy - 1);
    }
  };

  Walk walk;
  Grid<std::uint8_t> seen(region.width() + 1, region.height() + 1);
  int cx = sx, cy = sy, d = 0;
  do {
    if (seen(cx, cy)++ && !walk.pinch) walk.pinch = Pixel{cx, cy};
    walk.corners.push_back({static_cast<double>(cx), static_cast<double>(cy)});
    cx += kStep[d].x;
    cy += kStep[d].y;
    if (ahead(cx, cy, d, true)) {
      d = (d + 3) % 4;
    } else if (!ahead(cx, cy, d, false)) {
      d = (d + 1) % 4;
    }
  } while (!(cx == sx && cy == sy && d == 0));
  return walk;
}

}  // namespace

std::vector<Point> trace_outer_contour(const InstanceMap& labels,
                                       std::int32_t label) {
  int sx = -1, sy = -1;
  BinaryMask region(labels.width(), labels.height());
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      if (labels(x, y) != label) continue;
      region(x, y) = 1;
      if (sx < 0) {
        sx = x;
        sy = y;
      }
    }
  }
  if (sx < 0) return {};

  // A diagonal pinch would make the polygon touch itself. Bridge it with the
  // background pixel earlier in scan order and walk again.
  Walk walk = walk_boundary(region, sx, sy);
  while (walk.pinch) {
    const auto [px, py] = *walk.pinch;
    // The two background pixels at a pinch are diagonal to each other.
    if (!region(px - 1, py - 1)) {
      region(px - 1, py - 1) = 1;
    } else {
      region(px, py - 1) = 1;
    }
    walk = walk_boundary(region, sx, sy);
  }

  const auto& corners = walk.corners;
  std::vector<Point> out;
  const std::size_t n = corners.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& prev = corners[(i + n - 1) % n];
    const Point& cur = corners[i];
    const Point& next = corners[(i + 1) % n];
    const double cross =
        (cur.x - prev.x) * (next.y - cur.y) - (cur.y - prev.y) * (next.x - cur.x);
    if (cross != 0.0) out.push_back(cur);
  }
  return out;
}

std::vector<Polygon> instance_contours(const InstanceMap& labels) {
  std::int32_t max_label = 0;
  for (const auto l : labels.values()) max_label = std::max(max_label, l);
  std::vector<Polygon> out;
  for (std::int32_t l = 1; l <= max_label; ++l) {
    auto pts = trace_outer_contour(labels, l);
    if (pts.size() < 3) continue;
    out.emplace_back(std::move(pts));
  }
  return out;
}

}  // namespace textfield
