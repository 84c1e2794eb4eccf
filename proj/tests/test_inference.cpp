#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "textfield/eval.hpp"
#include "textfield/geometry.hpp"
#include "textfield/inference.hpp"

namespace textfield {
namespace {

DirectionField random_field(std::mt19937& rng, int w, int h, double zero_rate) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::bernoulli_distribution zero(zero_rate);
  DirectionField f(w, h);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (zero(rng)) continue;
    f.vx[i] = u(rng);
    f.vy[i] = u(rng);
  }
  return f;
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

// Index of the root reached from pixel i; fails the test on a cycle.
std::int32_t chase_root(const SuperpixelForest& f, std::int32_t i) {
  std::size_t steps = 0;
  while (f.parent[i] != SuperpixelForest::kRoot) {
    EXPECT_GE(f.parent[i], 0);
    i = f.parent[i];
    if (++steps > f.parent.size()) {
      ADD_FAILURE() << "parent chain does not terminate";
      return -1;
    }
  }
  return i;
}

TEST(Config, ValidatesDomains) {
  EXPECT_NO_THROW(InferenceConfig{}.validate());
  EXPECT_THROW((InferenceConfig{.lambda_m = 1.0}).validate(), InputError);
  EXPECT_THROW((InferenceConfig{.lambda_m = 0.0}).validate(), InputError);
  EXPECT_THROW((InferenceConfig{.lambda_r = 1.5}).validate(), InputError);
  EXPECT_THROW((InferenceConfig{.lambda_a = -1}).validate(), InputError);
  EXPECT_THROW((InferenceConfig{.k1 = 4}).validate(), InputError);
  EXPECT_THROW((InferenceConfig{.k2 = 0}).validate(), InputError);
}

TEST(Config, Presets) {
  EXPECT_DOUBLE_EQ(preset_config(Preset::kCtw1500).lambda_m, 0.59);
  EXPECT_DOUBLE_EQ(preset_config(Preset::kTotalText).lambda_m, 0.50);
  EXPECT_DOUBLE_EQ(preset_config(Preset::kIc15).lambda_m, 0.69);
  EXPECT_DOUBLE_EQ(preset_config(Preset::kTd500).lambda_m, 0.64);
  const auto c = preset_config(Preset::kIc15);
  EXPECT_EQ(c.lambda_r, 0.6);
  EXPECT_EQ(c.lambda_a, 200);
  EXPECT_EQ(c.k1, 3);
  EXPECT_EQ(c.k2, 11);
  for (const auto p : {Preset::kCtw1500, Preset::kTotalText, Preset::kIc15, Preset::kTd500}) {
    EXPECT_EQ(parse_preset(preset_name(p)), p);
  }
  EXPECT_FALSE(parse_preset("coco").has_value());
}

TEST(Threshold, Examples) {
  DirectionField f(3, 1);
  const auto out = threshold_candidates(f, 0.5);
  for (const auto v : out.values()) EXPECT_EQ(v, 0);
  f.vx[1] = 0.3f;
  f.vy[1] = 0.4f;
  const auto c = threshold_candidates(f, 0.5);
  EXPECT_EQ(c[1], 1);
  EXPECT_EQ(c[0], 0);
}

TEST(Threshold, GroundTruthFieldGivesTextMask) {
  const auto r = rasterize(PolygonScene(40, 30, {rect(3, 4, 30, 20)}));
  EXPECT_EQ(threshold_candidates(generate_field(r.labels), 0.5), r.mask);
}

TEST(Threshold, IsMonotone) {
  std::mt19937 rng(6);
  const auto f = random_field(rng, 30, 30, 0.1);
  const double levels[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int a = 0; a + 1 < 5; ++a) {
    const auto lo = threshold_candidates(f, levels[a]);
    const auto hi = threshold_candidates(f, levels[a + 1]);
    for (std::size_t i = 0; i < lo.size(); ++i) EXPECT_GE(lo[i], hi[i]);
  }
}

TEST(BinDirection, Examples) {
  EXPECT_EQ(bin_direction(1.0f, 0.0f), kE);
  EXPECT_EQ(bin_direction(0.7071f, 0.7071f), kSE);
  EXPECT_EQ(kBinOffsets[kSE], (Pixel{1, 1}));
  EXPECT_EQ(bin_direction(0.9f, 0.1f), kE);
  EXPECT_EQ(bin_direction(0.0f, -1.0f), kN);
  EXPECT_EQ(bin_direction(-1.0f, 0.0f), kW);
  EXPECT_EQ(bin_direction(0.0f, 1.0f), kS);
  EXPECT_EQ(bin_direction(-0.5f, -0.5f), kNW);
  EXPECT_EQ(bin_direction(-0.5f, 0.5f), kSW);
  EXPECT_EQ(bin_direction(0.5f, -0.5f), kNE);
  EXPECT_THROW(bin_direction(0.0f, 0.0f), InputError);
}

TEST(BinDirection, OffsetIsNearestAngle) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int t = 0; t < 20000; ++t) {
    const double a = ang(rng);
    const float vx = float(std::cos(a)), vy = float(std::sin(a));
    const int b = bin_direction(vx, vy);
    const auto o = kBinOffsets[b];
    const double len = std::hypot(double(o.x), double(o.y));
    const double cos_best = (vx * o.x + vy * o.y) / len;
    for (int k = 0; k < 8; ++k) {
      const auto q = kBinOffsets[k];
      EXPECT_GE(cos_best + 1e-6, (vx * q.x + vy * q.y) / std::hypot(double(q.x), double(q.y)));
    }
  }
}

TEST(BinDirection, TenDegreeNoiseMovesAtMostOneBin) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> noise(-10.0, 10.0);
  for (int t = 0; t < 20000; ++t) {
    const double a = ang(rng);
    const double b = a + noise(rng) * M_PI / 180.0;
    const int d = std::abs(bin_direction(float(std::cos(a)), float(std::sin(a))) -
                           bin_direction(float(std::cos(b)), float(std::sin(b))));
    EXPECT_LE(std::min(d, 8 - d), 1);
  }
}

TEST(Forest, SingleCandidateIsOneRoot) {
  DirectionField f(5, 5);
  f.vx(2, 2) = 1.0f;
  const auto forest = build_forest(f, threshold_candidates(f, 0.5));
  EXPECT_EQ(forest.superpixel_count, 1);
  ASSERT_EQ(forest.representatives.size(), 1u);
  EXPECT_EQ(forest.representatives[0].index, f.vx.index(2, 2));
  EXPECT_EQ(forest.representatives[0].bin, kE);
  EXPECT_EQ(forest.parent(2, 2), SuperpixelForest::kRoot);
  EXPECT_EQ(forest.parent(3, 2), SuperpixelForest::kNotCandidate);
}

TEST(Forest, MutualPairCollapsesToOneRoot) {
  DirectionField f(4, 1);
  f.vx(1, 0) = 1.0f;
  f.vx(2, 0) = -1.0f;
  const auto c = threshold_candidates(f, 0.5);

  const auto literal = build_forest(f, c, RootRule::kCandidateOnly);
  EXPECT_EQ(literal.superpixel_count, 1);
  ASSERT_EQ(literal.representatives.size(), 1u);
  EXPECT_EQ(literal.representatives[0].index, 1u);
  EXPECT_EQ(literal.parent(2, 0), 1);
  EXPECT_EQ(literal.labels(1, 0), literal.labels(2, 0));

  // The opposing vectors make both pixels roots under the default rule.
  const auto opposing = build_forest(f, c);
  EXPECT_EQ(opposing.representatives.size(), 2u);
}

TEST(Forest, StripRootsSitOnTheAxis) {
  const auto r = rasterize(PolygonScene(40, 15, {rect(0, 3, 40, 12)}));  // rows 3..11
  const auto f = generate_field(r.labels);
  for (const auto rule : {RootRule::kOpposingNeighbor, RootRule::kCandidateOnly}) {
    const auto forest = build_forest(f, threshold_candidates(f, 0.5), rule);
    for (int x = 10; x < 30; ++x) {
      for (int y = 3; y <= 6; ++y) EXPECT_EQ(forest.parent(x, y), int(f.vx.index(x, y + 1)));
      for (int y = 9; y <= 11; ++y) EXPECT_EQ(forest.parent(x, y), int(f.vx.index(x, y - 1)));
    }
    for (const auto& rep : forest.representatives) {
      const int x = int(rep.index % 40), y = int(rep.index / 40);
      if (x >= 10 && x < 30) {
        EXPECT_TRUE(y == 7 || y == 8) << x << "," << y;
      }
    }
  }
}

TEST(Forest, RandomFieldsAreAcyclicAndConsistent) {
  std::mt19937 rng(23);
  for (int t = 0; t < 40; ++t) {
    const auto f = random_field(rng, 25, 20, 0.2);
    const auto c = threshold_candidates(f, 0.3);
    for (const auto rule : {RootRule::kOpposingNeighbor, RootRule::kCandidateOnly}) {
      const auto forest = build_forest(f, c, rule);
      for (const auto& rep : forest.representatives) {
        EXPECT_EQ(forest.parent[rep.index], SuperpixelForest::kRoot);
      }
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i]) {
          EXPECT_EQ(forest.parent[i], SuperpixelForest::kNotCandidate);
          EXPECT_EQ(forest.labels[i], 0);
          continue;
        }
        const auto root = chase_root(forest, std::int32_t(i));
        ASSERT_GE(root, 0);
        EXPECT_EQ(forest.labels[i], forest.labels[root]);
        EXPECT_GT(forest.labels[i], 0);
      }
    }
  }
}

TEST(Groups, Distances) {
  DirectionField f(12, 6);
  f.vx(2, 2) = 1.0f;  // points at (3, 2), not a candidate
  f.vy(3, 3) = 1.0f;  // Chebyshev distance 1 from (2, 2)
  auto forest = build_forest(f, threshold_candidates(f, 0.5));
  ASSERT_EQ(forest.representatives.size(), 2u);
  EXPECT_EQ(group_representatives(forest, 3).count, 1);

  DirectionField g(12, 6);
  g.vx(2, 2) = 1.0f;
  g.vx(6, 2) = 1.0f;  // distance 4
  forest = build_forest(g, threshold_candidates(g, 0.5));
  const auto groups = group_representatives(forest, 3);
  EXPECT_EQ(groups.count, 2);
  EXPECT_EQ(groups.group_of, (std::vector<std::int32_t>{1, 2}));

  const auto empty = build_forest(DirectionField(5, 5), BinaryMask(5, 5));
  EXPECT_EQ(group_representatives(empty, 3).count, 0);
}

GroupBalance balance_of(std::vector<int> bins, double lambda_r) {
  SuperpixelForest forest;
  RepresentativeGroups groups;
  groups.count = 1;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    forest.representatives.push_back({k, bins[k]});
    groups.group_of.push_back(1);
  }
  return filter_unbalanced(groups, forest, lambda_r).at(1);
}

TEST(Filter, Examples) {
  auto g = balance_of({kE, kE, kE, kW, kW, kW}, 0.6);
  EXPECT_EQ(g.paired, 6u);
  EXPECT_TRUE(g.survives);

  g = balance_of(std::vector<int>(10, kE), 0.6);
  EXPECT_EQ(g.paired, 0u);
  EXPECT_FALSE(g.survives);

  g = balance_of({kN, kN, kS, kE}, 0.6);
  EXPECT_EQ(g.paired, 2u);
  EXPECT_EQ(g.size, 4u);
  EXPECT_FALSE(g.survives);
  EXPECT_TRUE(balance_of({kN, kN, kS, kE}, 0.5).survives);
}

TEST(Detect, TwoBarsWithThreePixelGap) {
  // Bars cover rows 5..16 and 20..31: a gap of rows 17..19.
  const PolygonScene scene(80, 40, {rect(10, 5, 70, 17), rect(10, 20, 70, 32)});
  const auto r = rasterize(scene);
  InferenceConfig config;
  config.lambda_m = 0.3;
  const auto det = detect(generate_field(r.labels), config);
  const auto matches = match_instances(det, r.labels, 0.5);
  ASSERT_EQ(matches.size(), 2u);
  for (const auto& m : matches) EXPECT_GE(m.iou, 0.90);
  std::int32_t max_label = 0;
  for (const auto l : det.values()) max_label = std::max(max_label, l);
  EXPECT_EQ(max_label, 2);
}

TEST(Detect, ZeroFieldIsEmpty) {
  const auto out = detect(DirectionField(30, 20), InferenceConfig{});
  for (const auto l : out.values()) {
    EXPECT_EQ(l, 0);
  }
}

TEST(Detect, SmallBlobIsDropped) {
  const auto r = rasterize(PolygonScene(40, 30, {rect(5, 5, 20, 15)}));  // 150 px
  InferenceConfig config;
  config.lambda_m = 0.3;
  const auto out = detect(generate_field(r.labels), config);
  for (const auto l : out.values()) EXPECT_EQ(l, 0);
  config.lambda_a = 100;
  const auto kept = detect(generate_field(r.labels), config);
  EXPECT_EQ(*std::max_element(kept.values().begin(), kept.values().end()), 1);
}

TEST(Detect, PropagationFollowsParents) {
  const PolygonScene scene(90, 60, {rect(5, 5, 80, 20), rect(10, 30, 50, 50),
                                    Polygon({{55, 28}, {85, 35}, {80, 55}, {58, 50}})});
  const auto r = rasterize(scene);
  std::mt19937 rng(3);
  auto f = generate_field(r.labels);
  std::normal_distribution<float> n(0.0f, 0.15f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (r.mask[i]) {
      f.vx[i] += n(rng);
      f.vy[i] += n(rng);
    }
  }
  InferenceConfig config;
  config.lambda_m = 0.3;
  const auto trace = run_inference(f, config);
  std::vector<std::int32_t> group_at(f.size(), 0);
  for (std::size_t k = 0; k < trace.forest.representatives.size(); ++k) {
    group_at[trace.forest.representatives[k].index] = trace.groups.group_of[k];
  }
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto id = trace.propagated[i];
    if (id == 0) continue;
    ++nonzero;
    const auto root = chase_root(trace.forest, std::int32_t(i));
    ASSERT_GE(root, 0);
    EXPECT_EQ(group_at[root], id);
    EXPECT_TRUE(trace.balance[id].survives);
  }
  EXPECT_GT(nonzero, 0u);
  for (int id = 1; id <= trace.instance_count; ++id) {
    std::size_t area = 0;
    for (const auto l : trace.instances.values()) area += l == id;
    EXPECT_GE(area, std::size_t(config.lambda_a));
  }
}

TEST(Detect, IsDeterministic) {
  std::mt19937 rng(31);
  const auto f = random_field(rng, 64, 48, 0.3);
  InferenceConfig config;
  config.lambda_a = 5;
  EXPECT_EQ(detect(f, config), detect(f, config));
}

TEST(Relabel, ScanOrder) {
  InstanceMap l(4, 1);
  l[0] = 9;
  l[1] = 4;
  l[2] = 9;
  EXPECT_EQ(relabel_scan_order(l), 2);
  EXPECT_EQ(l[0], 1);
  EXPECT_EQ(l[1], 2);
  EXPECT_EQ(l[2], 1);
  EXPECT_EQ(l[3], 0);
}

}  // namespace
}  // namespace textfield
