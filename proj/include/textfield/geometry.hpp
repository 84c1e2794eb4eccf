#pragma once

#include <cstddef>
#include <vector>

#include "textfield/grid.hpp"

namespace textfield {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// A simple closed polygon in pixel coordinates. Construction validates
/// the vertex list: at least three vertices, no consecutive duplicates
/// (including the closing edge), and no self-intersections.
class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// Signed shoelace area; positive for clockwise order in the y-down frame.
  double signed_area() const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> points_;
};

/// True when two non-adjacent edges of the closed vertex list touch or cross.
bool is_self_intersecting(const std::vector<Point>& points);

/// Image domain plus its text instances. Vertices must lie in
/// [0, width] x [0, height].
class PolygonScene {
 public:
  PolygonScene() = default;
  PolygonScene(int width, int height, std::vector<Polygon> instances = {});

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Polygon>& instances() const { return instances_; }

  void add(Polygon polygon);

  friend bool operator==(const PolygonScene&, const PolygonScene&) = default;

 private:
  void check_bounds(const Polygon& polygon) const;

  int width_ = 0;
  int height_ = 0;
  std::vector<Polygon> instances_;
};

struct Rasterization {
  BinaryMask mask;
  InstanceMap labels;
  /// 0-based indices of instances that covered no pixel center.
  std::vector<std::size_t> degenerate;
};

/// Pixel (i, j) is sampled at (i + 0.5, j + 0.5). A pixel belongs to an
/// instance when its center is inside under the even-odd rule or lies on
/// the boundary. Overlaps go to the lowest instance index.
Rasterization rasterize(const PolygonScene& scene);

/// Rasterizes a single polygon into a mask of the given size.
BinaryMask rasterize_polygon(const Polygon& polygon, int width, int height);

/// |a and b| / |a or b|, 0 when both are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

}  // namespace textfield
