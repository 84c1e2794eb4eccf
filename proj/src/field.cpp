#include "textfield/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace textfield {
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// A rectangular window of the plane [x0, x0 + w) x [y0, y0 + h) together with
// a predicate saying which cells are sites. Every cell in the window that is
// not a site and is flagged as a query gets its nearest site.
struct Window {
  int x0 = 0, y0 = 0, w = 0, h = 0;
  std::vector<std::uint8_t> site;   // w * h
  std::vector<std::uint8_t> query;  // w * h
};

// Exact squared distance to the nearest site, separable lower-envelope
// method: column scan, then per-row envelope of parabolas. Afterwards the
// nearest site is picked by walking the lattice circle of radius^2 = D in
// (y, x) order, which realizes the lowest-y-then-lowest-x tie rule.
void solve_window(const Window& win, FeatureTransform& out) {
  const int w = win.w, h = win.h;
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  std::vector<std::int64_t> col(static_cast<std::size_t>(w) * h, kInf);
  for (int x = 0; x < w; ++x) {
    std::int64_t last = kInf;
    for (int y = 0; y < h; ++y) {
      if (win.site[idx(x, y)]) {
        last = 0;
      } else if (last != kInf) {
        ++last;
      }
      col[idx(x, y)] = last;
    }
    last = kInf;
    for (int y = h - 1; y >= 0; --y) {
      if (win.site[idx(x, y)]) {
        last = 0;
      } else if (last != kInf) {
        ++last;
      }
      col[idx(x, y)] = std::min(col[idx(x, y)], last);
    }
  }

  std::vector<std::int64_t> dist(static_cast<std::size_t>(w) * h, kInf);
  std::vector<int> hull(w);
  std::vector<double> bound(w + 1);
  for (int y = 0; y < h; ++y) {
    auto f = [&](int i) {
      const std::int64_t g = col[idx(i, y)];
      return g * g;
    };
    int k = -1;
    for (int q = 0; q < w; ++q) {
      if (col[idx(q, y)] == kInf) continue;
      const double fq = static_cast<double>(f(q) + std::int64_t{q} * q);
      while (k >= 0) {
        const int v = hull[k];
        const double s =
            (fq - static_cast<double>(f(v) + std::int64_t{v} * v)) /
            (2.0 * (q - v));
        if (s <= bound[k]) {
          --k;
        } else {
          break;
        }
      }
      if (k < 0) {
        k = 0;
        hull[0] = q;
        bound[0] = -std::numeric_limits<double>::infinity();
      } else {
        const int v = hull[k];
        const double s =
            (fq - static_cast<double>(f(v) + std::int64_t{v} * v)) /
            (2.0 * (q - v));
        ++k;
        hull[k] = q;
        bound[k] = s;
      }
    }
    if (k < 0) continue;
    int j = 0;
    for (int x = 0; x < w; ++x) {
      while (j < k && bound[j + 1] < x) ++j;
      const std::int64_t dx = x - hull[j];
      dist[idx(x, y)] = dx * dx + f(hull[j]);
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!win.query[idx(x, y)]) continue;
      const std::int64_t d2 = dist[idx(x, y)];
      if (d2 == kInf) throw InputError("no background sites");
      const std::int64_t r = isqrt(d2);
      bool found = false;
      Pixel best{};
      for (std::int64_t dy = -r; dy <= r && !found; ++dy) {
        const std::int64_t rem = d2 - dy * dy;
        const std::int64_t dx = isqrt(rem);
        if (dx * dx != rem) continue;
        const int sy = y + static_cast<int>(dy);
        if (sy < 0 || sy >= h) continue;
        for (const std::int64_t cx : {x - dx, x + dx}) {
          if (cx < 0 || cx >= w || !win.site[idx(static_cast<int>(cx), sy)]) {
            continue;
          }
          best = {static_cast<int>(cx), sy};
          found = true;
          break;
        }
      }
      if (!found) {
        throw InvariantError("feature transform lost its nearest site");
      }
      const int gx = win.x0 + x, gy = win.y0 + y;
      out.nearest(gx, gy) = {win.x0 + best.x, win.y0 + best.y};
      out.sq_distance(gx, gy) = d2;
    }
  }
}

FeatureTransform empty_transform(int width, int height) {
  FeatureTransform ft;
  ft.text = BinaryMask(width, height);
  ft.nearest = Grid<Pixel>(width, height);
  ft.sq_distance = Grid<std::int64_t>(width, height);
  return ft;
}

struct Box {
  int x0, y0, x1, y1;  // inclusive
};

template <typename IsText>
Window make_window(const Box& box, int width, int height, Border border,
                   IsText is_text) {
  Window win;
  win.x0 = box.x0 - 1;
  win.y0 = box.y0 - 1;
  int x1 = box.x1 + 1, y1 = box.y1 + 1;
  if (border == Border::kText) {
    win.x0 = std::max(win.x0, 0);
    win.y0 = std::max(win.y0, 0);
    x1 = std::min(x1, width - 1);
    y1 = std::min(y1, height - 1);
  }
  win.w = x1 - win.x0 + 1;
  win.h = y1 - win.y0 + 1;
  win.site.assign(static_cast<std::size_t>(win.w) * win.h, 0);
  win.query.assign(win.site.size(), 0);
  for (int y = 0; y < win.h; ++y) {
    for (int x = 0; x < win.w; ++x) {
      const int gx = win.x0 + x, gy = win.y0 + y;
      const bool inside = gx >= 0 && gy >= 0 && gx < width && gy < height;
      const bool text = inside && is_text(gx, gy);
      const std::size_t i = static_cast<std::size_t>(y) * win.w + x;
      win.site[i] = !text;
      win.query[i] = text;
    }
  }
  return win;
}

}  // namespace

FeatureTransform feature_transform(const BinaryMask& mask, Border border) {
  FeatureTransform ft = empty_transform(mask.width(), mask.height());
  bool any = false;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    ft.text[i] = mask[i] != 0;
    any = any || ft.text[i];
  }
  if (!any) return ft;
  const Box box{0, 0, mask.width() - 1, mask.height() - 1};
  const Window win = make_window(box, mask.width(), mask.height(), border,
                                 [&](int x, int y) { return mask(x, y) != 0; });
  solve_window(win, ft);
  return ft;
}

FeatureTransform feature_transform(const InstanceMap& labels, Border border) {
  const int width = labels.width(), height = labels.height();
  FeatureTransform ft = empty_transform(width, height);

  std::int32_t max_label = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw InputError("negative instance label");
    max_label = std::max(max_label, labels[i]);
    ft.text[i] = labels[i] != 0;
  }
  std::vector<Box> boxes(static_cast<std::size_t>(max_label) + 1,
                         Box{width, height, -1, -1});
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::int32_t l = labels(x, y);
      if (l == 0) continue;
      Box& b = boxes[l];
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x);
      b.y1 = std::max(b.y1, y);
    }
  }
  // Any site outside an instance's bounding box is strictly farther than a
  // site on the one-pixel ring around it, so each instance is solved on its
  // own box grown by one.
  for (std::int32_t id = 1; id <= max_label; ++id) {
    const Box& b = boxes[id];
    if (b.x1 < 0) continue;
    const Window win =
        make_window(b, width, height, border,
                    [&](int x, int y) { return labels(x, y) == id; });
    solve_window(win, ft);
  }
  return ft;
}

float vector_magnitude(float vx, float vy) {
  const double x = vx, y = vy;
  return static_cast<float>(std::sqrt(x * x + y * y));
}

bool fit_magnitude(float& vx, float& vy, float target) {
  // Nudge the dominant component one ulp at a time.
  for (int step = 0; step < 16; ++step) {
    const float m = vector_magnitude(vx, vy);
    if (m == target) return true;
    float& big = std::abs(vx) >= std::abs(vy) ? vx : vy;
    if (big == 0.0f) return false;
    big = std::nextafter(big, m > target ? 0.0f : 2.0f * big);
  }
  while (vector_magnitude(vx, vy) > target) {
    float& big = std::abs(vx) >= std::abs(vy) ? vx : vy;
    big = std::nextafter(big, 0.0f);
  }
  return false;
}

DirectionField generate_field(const FeatureTransform& ft) {
  DirectionField field(ft.width(), ft.height());
  for (int y = 0; y < ft.height(); ++y) {
    for (int x = 0; x < ft.width(); ++x) {
      if (!ft.text(x, y)) continue;
      const Pixel n = ft.nearest(x, y);
      const double dx = x - n.x, dy = y - n.y;
      const double len = std::sqrt(dx * dx + dy * dy);
      float vx = static_cast<float>(dx / len);
      float vy = static_cast<float>(dy / len);
      if (!fit_magnitude(vx, vy, 1.0f)) {
        throw InvariantError("direction vector could not be normalized");
      }
      field.vx(x, y) = vx;
      field.vy(x, y) = vy;
    }
  }
  return field;
}

DirectionField generate_field(const BinaryMask& mask, Border border) {
  return generate_field(feature_transform(mask, border));
}

DirectionField generate_field(const InstanceMap& labels, Border border) {
  return generate_field(feature_transform(labels, border));
}

ScalarMap magnitude(const DirectionField& field) {
  ScalarMap out(field.width(), field.height());
  for (std::size_t i = 0; i < field.size(); ++i) {
    out[i] = vector_magnitude(field.vx[i], field.vy[i]);
  }
  return out;
}

}  // namespace textfield
