#include "textfield/morphology.hpp"

#include <string>
#include <vector>

namespace textfield::morph {
namespace {

void check_side(int side) {
  if (side <= 0 || side % 2 == 0) {
    throw InputError("structuring element side must be odd and positive, got " +
                     std::to_string(side));
  }
}

// Sliding-window count along one axis. `want_all` selects erosion
// (every pixel in the window set) over dilation (any pixel set).
BinaryMask sweep(const BinaryMask& in, int radius, bool horizontal,
                 bool want_all) {
  const int w = in.width(), h = in.height();
  BinaryMask out(w, h);
  const int lines = horizontal ? h : w;
  const int len = horizontal ? w : h;
  const int window = 2 * radius + 1;
  auto at = [&](int line, int pos) -> int {
    if (pos < 0 || pos >= len) return 0;
    return horizontal ? in(pos, line) : in(line, pos);
  };
  for (int line = 0; line < lines; ++line) {
    int count = 0;
    for (int pos = -radius; pos < radius; ++pos) count += at(line, pos);
    for (int pos = 0; pos < len; ++pos) {
      count += at(line, pos + radius);
      const bool set = want_all ? count == window : count > 0;
      if (horizontal) {
        out(pos, line) = set;
      } else {
        out(line, pos) = set;
      }
      count -= at(line, pos - radius);
    }
  }
  return out;
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int side) {
  check_side(side);
  const int r = side / 2;
  if (r == 0) return mask;
  return sweep(sweep(mask, r, true, false), r, false, false);
}

BinaryMask erode(const BinaryMask& mask, int side) {
  check_side(side);
  const int r = side / 2;
  if (r == 0) return mask;
  return sweep(sweep(mask, r, true, true), r, false, true);
}

BinaryMask close(const BinaryMask& mask, int side) {
  check_side(side);
  const int r = side / 2;
  if (r == 0) return mask;
  const int pad = 2 * r;
  BinaryMask padded(mask.width() + 2 * pad, mask.height() + 2 * pad);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) padded(x + pad, y + pad) = mask(x, y);
  }
  const BinaryMask closed = erode(dilate(padded, side), side);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) out(x, y) = closed(x + pad, y + pad);
  }
  return out;
}

Components label_components(const BinaryMask& mask) {
  Components out{InstanceMap(mask.width(), mask.height()), 0};
  std::vector<Pixel> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || out.labels(x, y) != 0) continue;
      const std::int32_t id = ++out.count;
      out.labels(x, y) = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int qx = p.x + dx, qy = p.y + dy;
            if (!mask.contains(qx, qy) || !mask(qx, qy) ||
                out.labels(qx, qy) != 0) {
              continue;
            }
            out.labels(qx, qy) = id;
            stack.push_back({qx, qy});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace textfield::morph
