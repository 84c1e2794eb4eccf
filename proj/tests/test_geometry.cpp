#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "textfield/geometry.hpp"

namespace textfield {
namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

std::size_t count(const BinaryMask& m) {
  std::size_t n = 0;
  for (const auto v : m.values()) n += v != 0;
  return n;
}

TEST(Rasterize, SquareMatchesBruteForce) {
  const PolygonScene scene(6, 6, {rect(1, 1, 4, 4)});
  const auto r = rasterize(scene);
  EXPECT_EQ(r.labels, oracle::rasterize(scene));
  EXPECT_EQ(count(r.mask), 9u);
  EXPECT_TRUE(r.mask(1, 1));
  EXPECT_TRUE(r.mask(3, 3));
  EXPECT_FALSE(r.mask(4, 4));
}

TEST(Rasterize, EmptySceneIsBackground) {
  const auto r = rasterize(PolygonScene(7, 5));
  EXPECT_EQ(count(r.mask), 0u);
  for (const auto l : r.labels.values()) EXPECT_EQ(l, 0);
}

TEST(Rasterize, TwoDisjointSquaresHaveLabelsZeroOneTwo) {
  const PolygonScene scene(12, 8, {rect(1, 1, 4, 4), rect(6, 2, 10, 7)});
  const auto r = rasterize(scene);
  EXPECT_EQ(r.labels, oracle::rasterize(scene));
  const std::set<std::int32_t> values(r.labels.values().begin(),
                                      r.labels.values().end());
  EXPECT_EQ(values, (std::set<std::int32_t>{0, 1, 2}));
}

TEST(Rasterize, BoundaryPixelCentersAreIncluded) {
  // Edges pass exactly through pixel centers at x = 2.5 and y = 1.5.
  const PolygonScene scene(8, 8, {Polygon({{2.5, 1.5}, {5.5, 1.5}, {5.5, 4.5}, {2.5, 4.5}})});
  const auto r = rasterize(scene);
  EXPECT_EQ(r.labels, oracle::rasterize(scene));
  EXPECT_EQ(count(r.mask), 16u);
}

TEST(Rasterize, OverlapGoesToLowestIndex) {
  const PolygonScene scene(10, 10, {rect(0, 0, 6, 6), rect(3, 3, 9, 9)});
  const auto r = rasterize(scene);
  EXPECT_EQ(r.labels(4, 4), 1);
  EXPECT_EQ(r.labels(7, 7), 2);
  EXPECT_EQ(r.labels, oracle::rasterize(scene));
}

TEST(Rasterize, ZeroAreaInstanceIsReportedDegenerate) {
  // A sliver between pixel centers covers nothing.
  const PolygonScene scene(10, 10, {rect(1, 1, 5, 5),
                                    Polygon({{6.1, 1}, {6.4, 1}, {6.4, 8}})});
  const auto r = rasterize(scene);
  ASSERT_EQ(r.degenerate.size(), 1u);
  EXPECT_EQ(r.degenerate[0], 1u);
}

TEST(Rasterize, RandomPolygonsMatchBruteForce) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(0.0, 40.0);
  std::uniform_int_distribution<int> icoord(0, 40);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 120; ++trial) {
    std::vector<Point> pts;
    const int n = 3 + trial % 6;
    for (int k = 0; k < n; ++k) {
      // Mix integer and fractional vertices.
      pts.push_back(trial % 2 ? Point{coord(rng), coord(rng)}
                              : Point{double(icoord(rng)), double(icoord(rng))});
    }
    if (is_self_intersecting(pts)) continue;
    Polygon poly;
    try {
      poly = Polygon(pts);
    } catch (const InputError&) {
      continue;
    }
    const PolygonScene scene(40, 40, {poly});
    EXPECT_EQ(rasterize(scene).labels, oracle::rasterize(scene)) << "trial " << trial;
    ++checked;
  }
  EXPECT_GE(checked, 60);
}

TEST(Rasterize, IsDeterministicAndMaskMatchesLabels) {
  const PolygonScene scene(30, 20, {rect(2, 2, 12, 9), Polygon({{15, 3}, {28, 5}, {20, 18}})});
  const auto a = rasterize(scene);
  const auto b = rasterize(scene);
  EXPECT_EQ(a.mask, b.mask);
  EXPECT_EQ(a.labels, b.labels);
  for (std::size_t i = 0; i < a.mask.size(); ++i) {
    EXPECT_EQ(a.mask[i] != 0, a.labels[i] != 0);
  }
}

TEST(Polygon, RejectsInvalidVertexLists) {
  EXPECT_THROW(Polygon({{0, 0}, {1, 1}}), InputError);
  EXPECT_THROW(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), InputError);
  EXPECT_THROW(Polygon({{0, 0}, {4, 0}, {0, 4}, {0, 0}}), InputError);
  // Bow tie.
  EXPECT_THROW(Polygon({{0, 0}, {4, 4}, {4, 0}, {0, 4}}), InputError);
  // Spike folding back on itself.
  EXPECT_THROW(Polygon({{0, 0}, {4, 0}, {2, 0}, {2, 3}}), InputError);
  EXPECT_NO_THROW(Polygon({{0, 0}, {4, 0}, {4, 4}, {2, 1}, {0, 4}}));
}

TEST(PolygonScene, RejectsVerticesOutsideDomain) {
  EXPECT_THROW(PolygonScene(10, 10, {rect(-1, 0, 4, 4)}), InputError);
  EXPECT_THROW(PolygonScene(10, 10, {rect(0, 0, 11, 4)}), InputError);
  EXPECT_NO_THROW(PolygonScene(10, 10, {rect(0, 0, 10, 10)}));
}

TEST(MaskIou, Examples) {
  BinaryMask a(4, 2), b(4, 2);
  for (int y = 0; y < 2; ++y) {
    a(0, y) = a(1, y) = 1;
    b(1, y) = b(2, y) = 1;
  }
  EXPECT_DOUBLE_EQ(mask_iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(mask_iou(a, b), 2.0 / 6.0);

  BinaryMask c(4, 2);
  c(3, 0) = 1;
  EXPECT_DOUBLE_EQ(mask_iou(a, c), 0.0);
  EXPECT_DOUBLE_EQ(mask_iou(BinaryMask(4, 2), BinaryMask(4, 2)), 0.0);
  EXPECT_THROW(mask_iou(a, BinaryMask(3, 2)), InputError);
}

TEST(MaskIou, SymmetricOnRandomMasks) {
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_mask(rng, 16, 12, 0.3);
    const auto b = oracle::random_mask(rng, 16, 12, 0.3);
    EXPECT_EQ(mask_iou(a, b), mask_iou(b, a));
    if (std::any_of(a.values().begin(), a.values().end(), [](auto v) { return v; })) {
      EXPECT_EQ(mask_iou(a, a), 1.0);
    }
  }
}

}  // namespace
}  // namespace textfield
