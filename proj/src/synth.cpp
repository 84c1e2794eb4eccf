#include "textfield/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "textfield/morphology.hpp"
#include "textfield/random.hpp"

namespace textfield {
namespace {

constexpr std::uint64_t kSceneStream = 1;
constexpr std::uint64_t kAngleStream = 101;
constexpr std::uint64_t kMagnitudeStream = 102;
constexpr std::uint64_t kDropoutStream = 103;

std::vector<Point> rounded(const std::vector<Point>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    const Point q{std::round(p.x), std::round(p.y)};
    if (out.empty() || !(out.back() == q)) out.push_back(q);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

std::vector<Point> axis_bar(RngStream& rng, const SynthSpec& s) {
  const double len = rng.uniform(s.length_min, s.length_max);
  const double stroke = rng.uniform(s.stroke_min, s.stroke_max);
  const bool vertical = rng.uniform() < 0.3;
  const double w = vertical ? stroke : len;
  const double h = vertical ? len : stroke;
  const double x0 = rng.uniform(s.margin, s.width - s.margin - w);
  const double y0 = rng.uniform(s.margin, s.height - s.margin - h);
  return {{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}};
}

std::vector<Point> rotated_bar(RngStream& rng, const SynthSpec& s) {
  const double len = rng.uniform(s.length_min, s.length_max);
  const double stroke = rng.uniform(s.stroke_min, s.stroke_max);
  const double theta = rng.uniform(0.0, std::numbers::pi);
  const double cx = rng.uniform(s.margin, s.width - s.margin);
  const double cy = rng.uniform(s.margin, s.height - s.margin);
  const double ux = std::cos(theta), uy = std::sin(theta);
  const double hl = len / 2.0, hs = stroke / 2.0;
  return {{cx - hl * ux + hs * uy, cy - hl * uy - hs * ux},
          {cx + hl * ux + hs * uy, cy + hl * uy - hs * ux},
          {cx + hl * ux - hs * uy, cy + hl * uy + hs * ux},
          {cx - hl * ux - hs * uy, cy - hl * uy + hs * ux}};
}

// Annulus sector; chords deviate from the true arc by at most 1 px before
// vertex rounding, which adds at most another 0.71 px.
std::vector<Point> arc_ribbon(RngStream& rng, const SynthSpec& s) {
  const double stroke = rng.uniform(s.stroke_min, s.stroke_max);
  const double len = rng.uniform(s.length_min, s.length_max);
  const double radius = rng.uniform(std::max(1.5 * stroke, 25.0),
                                    std::max(1.5 * stroke, 25.0) + 80.0);
  const double span = std::min(len / radius, 1.2 * std::numbers::pi);
  const double start = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double cx = rng.uniform(s.margin, s.width - s.margin);
  const double cy = rng.uniform(s.margin, s.height - s.margin);
  const double outer = radius + stroke / 2.0;
  const double inner = radius - stroke / 2.0;
  const double step = 2.0 * std::acos(1.0 - 1.0 / outer);
  const int segments = std::max(2, static_cast<int>(std::ceil(span / step)));

  std::vector<Point> pts;
  for (int i = 0; i <= segments; ++i) {
    const double a = start + span * i / segments;
    pts.push_back({cx + outer * std::cos(a), cy + outer * std::sin(a)});
  }
  for (int i = segments; i >= 0; --i) {
    const double a = start + span * i / segments;
    pts.push_back({cx + inner * std::cos(a), cy + inner * std::sin(a)});
  }
  return pts;
}

bool within_margin(const std::vector<Point>& pts, const SynthSpec& s) {
  return std::all_of(pts.begin(), pts.end(), [&](const Point& p) {
    return p.x >= s.margin && p.y >= s.margin && p.x <= s.width - s.margin &&
           p.y <= s.height - s.margin;
  });
}

}  // namespace

std::optional<ShapeFamily> parse_shape_family(std::string_view name) {
  if (name == "axis_bar") return ShapeFamily::kAxisBar;
  if (name == "rotated_bar") return ShapeFamily::kRotatedBar;
  if (name == "arc_ribbon") return ShapeFamily::kArcRibbon;
  if (name == "mixed") return ShapeFamily::kMixed;
  return std::nullopt;
}

std::string_view shape_family_name(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::kAxisBar: return "axis_bar";
    case ShapeFamily::kRotatedBar: return "rotated_bar";
    case ShapeFamily::kArcRibbon: return "arc_ribbon";
    case ShapeFamily::kMixed: return "mixed";
  }
  return "unknown";
}

void SynthSpec::validate() const {
  if (width <= 0 || height <= 0) throw InputError("synth: image size must be positive");
  if (count_min < 0 || count_max < count_min) {
    throw InputError("synth: instance count range is empty");
  }
  if (!(stroke_min > 0.0) || stroke_max < stroke_min) {
    throw InputError("synth: invalid stroke range");
  }
  if (!(length_min > 0.0) || length_max < length_min) {
    throw InputError("synth: invalid length range");
  }
  if (min_gap < 0 || margin < 0 || min_area < 0 || max_attempts <= 0) {
    throw InputError("synth: gap, margin, area and attempts must be non-negative");
  }
  if (2 * margin + std::max(stroke_min, length_min) > std::max(width, height)) {
    throw InputError("synth: instances cannot fit inside the margins");
  }
}

PolygonScene generate_scene(const SynthSpec& spec) {
  spec.validate();
  RngStream rng(CounterRng(spec.seed), kSceneStream);
  PolygonScene scene(spec.width, spec.height);
  const int count = rng.uniform_int(spec.count_min, spec.count_max);

  BinaryMask occupied(spec.width, spec.height);
  BinaryMask forbidden(spec.width, spec.height);
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
      ShapeFamily family = spec.shape;
      if (family == ShapeFamily::kMixed) {
        family = static_cast<ShapeFamily>(rng.uniform_int(0, 2));
      }
      std::vector<Point> raw;
      switch (family) {
        case ShapeFamily::kAxisBar: raw = axis_bar(rng, spec); break;
        case ShapeFamily::kRotatedBar: raw = rotated_bar(rng, spec); break;
        default: raw = arc_ribbon(rng, spec); break;
      }
      auto pts = rounded(raw);
      if (pts.size() < 3 || !within_margin(pts, spec) ||
          is_self_intersecting(pts)) {
        continue;
      }
      Polygon polygon(std::move(pts));
      const BinaryMask mask =
          rasterize_polygon(polygon, spec.width, spec.height);
      std::size_t area = 0;
      bool clash = false;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        ++area;
        clash = clash || forbidden[i];
      }
      if (clash || area < static_cast<std::size_t>(std::max(spec.min_area, 1))) {
        continue;
      }
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) occupied[i] = 1;
      }
      forbidden = morph::dilate(occupied, 2 * spec.min_gap + 1);
      scene.add(std::move(polygon));
      placed = true;
    }
    if (!placed) {
      throw InputError("synth: could not place instance " + std::to_string(k) +
                       " after " + std::to_string(spec.max_attempts) +
                       " attempts (seed " + std::to_string(spec.seed) + ")");
    }
  }
  return scene;
}

void NoiseModel::validate() const {
  if (angle_sigma < 0.0 || magnitude_sigma < 0.0 || dropout_rate < 0.0 ||
      dropout_rate > 1.0) {
    throw InputError("noise parameters must be non-negative, dropout <= 1");
  }
}

DirectionField perturb_field(const DirectionField& field,
                             const NoiseModel& noise) {
  noise.validate();
  const CounterRng rng(noise.seed);
  DirectionField out = field;
  const double deg = std::numbers::pi / 180.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const float vx = field.vx[i], vy = field.vy[i];
    if (vx == 0.0f && vy == 0.0f) continue;
    if (noise.dropout_rate > 0.0 &&
        rng.uniform(kDropoutStream, i) < noise.dropout_rate) {
      out.vx[i] = 0.0f;
      out.vy[i] = 0.0f;
      continue;
    }
    if (noise.angle_sigma == 0.0 && noise.magnitude_sigma == 0.0) continue;
    double scale = 1.0;
    if (noise.magnitude_sigma > 0.0) {
      scale = std::max(0.0, 1.0 + noise.magnitude_sigma *
                                      rng.normal(kMagnitudeStream, i));
    }
    double x = vx, y = vy;
    if (noise.angle_sigma > 0.0) {
      const double a = noise.angle_sigma * deg * rng.normal(kAngleStream, i);
      const double c = std::cos(a), s = std::sin(a);
      const double rx = c * x - s * y;
      const double ry = s * x + c * y;
      x = rx;
      y = ry;
    }
    float ox = static_cast<float>(x * scale);
    float oy = static_cast<float>(y * scale);
    if (noise.magnitude_sigma == 0.0) {
      // Pure rotation keeps the stored magnitude.
      fit_magnitude(ox, oy, vector_magnitude(vx, vy));
    }
    out.vx[i] = ox;
    out.vy[i] = oy;
  }
  return out;
}

}  // namespace textfield
