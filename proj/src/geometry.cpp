#include "textfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace textfield {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(const Point& p, const Point& a, const Point& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(const Point& a, const Point& b, const Point& c,
                    const Point& d) {
  const int d1 = sign(cross(c, d, a));
  const int d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c));
  const int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

// Fills one polygon into `labels` with value `id` wherever the label is
// still zero. Returns the number of pixels written.
std::size_t fill_polygon(const Polygon& polygon, std::int32_t id,
                         InstanceMap& labels) {
  const auto& pts = polygon.points();
  const std::size_t n = pts.size();
  const int width = labels.width();
  const int height = labels.height();

  double min_y = pts[0].y, max_y = pts[0].y;
  for (const auto& p : pts) {
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const int row_begin = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
  const int row_end =
      std::min(height - 1, static_cast<int>(std::floor(max_y - 0.5)));

  std::size_t written = 0;
  auto mark = [&](int x, int y) {
    if (x < 0 || x >= width) return;
    auto& cell = labels(x, y);
    if (cell == 0) {
      cell = id;
      ++written;
    }
  };

  std::vector<double> crossings;
  for (int row = row_begin; row <= row_end; ++row) {
    const double cy = row + 0.5;
    crossings.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = pts[i];
      const Point& b = pts[(i + 1) % n];
      // Half-open rule so shared vertices are counted once.
      if ((a.y <= cy && cy < b.y) || (b.y <= cy && cy < a.y)) {
        crossings.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const int x0 = static_cast<int>(std::ceil(crossings[k] - 0.5));
      const int x1 = static_cast<int>(std::floor(crossings[k + 1] - 0.5));
      for (int x = std::max(x0, 0); x <= std::min(x1, width - 1); ++x) {
        mark(x, row);
      }
    }
    // Pixel centers lying exactly on an edge.
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = pts[i];
      const Point& b = pts[(i + 1) % n];
      if (cy < std::min(a.y, b.y) || cy > std::max(a.y, b.y)) continue;
      if (a.y == b.y) {
        const int x0 = static_cast<int>(std::ceil(std::min(a.x, b.x) - 0.5));
        const int x1 = static_cast<int>(std::floor(std::max(a.x, b.x) - 0.5));
        for (int x = std::max(x0, 0); x <= std::min(x1, width - 1); ++x) {
          mark(x, row);
        }
        continue;
      }
      const double ex = a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y);
      const int x = static_cast<int>(std::lround(ex - 0.5));
      const Point center{x + 0.5, cy};
      if (cross(a, b, center) == 0.0 && on_segment(center, a, b)) {
        mark(x, row);
      }
    }
  }
  return written;
}

}  // namespace

Polygon::Polygon(std::vector<Point> points) : points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n < 3) {
    throw InputError("polygon needs at least 3 vertices, got " +
                     std::to_string(n));
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InputError("polygon vertex is not finite");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (points_[i] == points_[(i + 1) % n]) {
      throw InputError("polygon has consecutive duplicate vertex at index " +
                       std::to_string((i + 1) % n));
    }
  }
  if (is_self_intersecting(points_)) {
    throw InputError("polygon is self-intersecting");
  }
}

double Polygon::signed_area() const {
  double twice = 0.0;
  const std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = points_[i];
    const Point& b = points_[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

bool is_self_intersecting(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point& c = pts[j];
      const Point& d = pts[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one vertex; they may not fold back onto
        // each other.
        const Point& shared = (j == i + 1) ? b : a;
        const Point& p = (j == i + 1) ? a : b;
        const Point& q = (j == i + 1) ? d : c;
        if (cross(shared, p, q) == 0.0 &&
            (p.x - shared.x) * (q.x - shared.x) +
                    (p.y - shared.y) * (q.y - shared.y) >
                0.0) {
          return true;
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) return true;
    }
  }
  return false;
}

PolygonScene::PolygonScene(int width, int height,
                           std::vector<Polygon> instances)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw InputError("scene dimensions must be positive");
  }
  for (auto& polygon : instances) add(std::move(polygon));
}

void PolygonScene::check_bounds(const Polygon& polygon) const {
  for (const auto& p : polygon.points()) {
    if (p.x < 0.0 || p.y < 0.0 || p.x > width_ || p.y > height_) {
      throw InputError("polygon vertex (" + std::to_string(p.x) + ", " +
                       std::to_string(p.y) + ") outside " +
                       std::to_string(width_) + "x" + std::to_string(height_) +
                       " domain");
    }
  }
}

void PolygonScene::add(Polygon polygon) {
  check_bounds(polygon);
  instances_.push_back(std::move(polygon));
}

Rasterization rasterize(const PolygonScene& scene) {
  Rasterization out;
  out.labels = InstanceMap(scene.width(), scene.height());
  const auto& instances = scene.instances();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto written =
        fill_polygon(instances[i], static_cast<std::int32_t>(i + 1), out.labels);
    if (written == 0) {
      // Either zero area or fully covered by a lower-index instance.
      out.degenerate.push_back(i);
    }
  }
  out.mask = BinaryMask(scene.width(), scene.height());
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    out.mask[i] = out.labels[i] != 0 ? 1 : 0;
  }
  return out;
}

BinaryMask rasterize_polygon(const Polygon& polygon, int width, int height) {
  InstanceMap labels(width, height);
  fill_polygon(polygon, 1, labels);
  BinaryMask mask(width, height);
  for (std::size_t i = 0; i < labels.size(); ++i) mask[i] = labels[i] != 0;
  return mask;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_iou");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool pa = a[i] != 0, pb = b[i] != 0;
    inter += pa && pb;
    uni += pa || pb;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace textfield
