#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "textfield/geometry.hpp"
#include "textfield/synth.hpp"

namespace textfield {
namespace {

// Smallest Chebyshev distance between pixels of different instances.
int min_chebyshev_gap(const InstanceMap& labels) {
  std::vector<Pixel> px;
  std::vector<std::int32_t> id;
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      if (labels(x, y) == 0) continue;
      // Only boundary pixels can realize the minimum.
      bool edge = false;
      for (int dy = -1; dy <= 1 && !edge; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (!labels.contains(x + dx, y + dy) || labels(x + dx, y + dy) != labels(x, y)) {
            edge = true;
            break;
          }
        }
      }
      if (edge) {
        px.push_back({x, y});
        id.push_back(labels(x, y));
      }
    }
  }
  int best = 1 << 30;
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (std::size_t j = i + 1; j < px.size(); ++j) {
      if (id[i] == id[j]) continue;
      best = std::min(best, std::max(std::abs(px[i].x - px[j].x), std::abs(px[i].y - px[j].y)));
    }
  }
  return best;
}

TEST(Synth, EmptyCountRange) {
  SynthSpec spec;
  spec.count_min = spec.count_max = 0;
  EXPECT_TRUE(generate_scene(spec).instances().empty());
}

TEST(Synth, SameSeedSameScene) {
  SynthSpec spec;
  spec.seed = 99;
  EXPECT_EQ(generate_scene(spec), generate_scene(spec));
  SynthSpec other = spec;
  other.seed = 100;
  EXPECT_NE(generate_scene(spec), generate_scene(other));
}

TEST(Synth, TwoAxisBarsKeepTheGap) {
  SynthSpec spec;
  spec.shape = ShapeFamily::kAxisBar;
  spec.count_min = spec.count_max = 2;
  spec.min_gap = 3;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    spec.seed = seed;
    const auto labels = rasterize(generate_scene(spec)).labels;
    std::set<std::int32_t> ids(labels.values().begin(), labels.values().end());
    ids.erase(0);
    EXPECT_EQ(ids.size(), 2u);
    EXPECT_GE(min_chebyshev_gap(labels), spec.min_gap + 1) << "seed " << seed;
  }
}

TEST(Synth, ScenesHonorGapMarginAndArea) {
  for (const auto family :
       {ShapeFamily::kRotatedBar, ShapeFamily::kArcRibbon, ShapeFamily::kMixed}) {
    SynthSpec spec;
    spec.shape = family;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      spec.seed = seed;
      const auto scene = generate_scene(spec);
      const auto r = rasterize(scene);
      EXPECT_TRUE(r.degenerate.empty());
      ASSERT_GE(int(scene.instances().size()), spec.count_min);
      ASSERT_LE(int(scene.instances().size()), spec.count_max);
      for (const auto& poly : scene.instances()) {
        // Reconstructing validates simplicity again.
        EXPECT_NO_THROW(Polygon(poly.points()));
        for (const auto& p : poly.points()) {
          EXPECT_EQ(p.x, std::round(p.x));
          EXPECT_GE(p.x, spec.margin);
          EXPECT_LE(p.x, spec.width - spec.margin);
          EXPECT_GE(p.y, spec.margin);
          EXPECT_LE(p.y, spec.height - spec.margin);
        }
      }
      for (std::size_t k = 1; k <= scene.instances().size(); ++k) {
        const auto area = std::count(r.labels.values().begin(), r.labels.values().end(),
                                     std::int32_t(k));
        EXPECT_GE(area, spec.min_area);
      }
      if (scene.instances().size() > 1) {
        EXPECT_GE(min_chebyshev_gap(r.labels), spec.min_gap + 1);
      }
    }
  }
}

TEST(Synth, InfeasiblePackingThrows) {
  SynthSpec spec;
  spec.width = 60;
  spec.height = 60;
  spec.count_min = spec.count_max = 40;
  spec.max_attempts = 20;
  EXPECT_THROW(generate_scene(spec), InputError);
}

TEST(Synth, ValidatesSpec) {
  SynthSpec spec;
  spec.count_min = 3;
  spec.count_max = 2;
  EXPECT_THROW(generate_scene(spec), InputError);
  EXPECT_EQ(parse_shape_family("arc"), std::nullopt);
  for (const auto f : {ShapeFamily::kAxisBar, ShapeFamily::kRotatedBar, ShapeFamily::kArcRibbon,
                       ShapeFamily::kMixed}) {
    EXPECT_EQ(parse_shape_family(shape_family_name(f)), f);
  }
}

DirectionField scene_field(std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  return generate_field(rasterize(generate_scene(spec)).labels);
}

TEST(Perturb, ZeroNoiseIsIdentity) {
  const auto f = scene_field(3);
  EXPECT_EQ(perturb_field(f, NoiseModel{}), f);
  EXPECT_EQ(perturb_field(f, NoiseModel{.seed = 77}), f);
}

TEST(Perturb, RotationPreservesMagnitude) {
  const auto f = scene_field(4);
  const auto g = perturb_field(f, NoiseModel{.angle_sigma = 180.0, .seed = 5});
  const auto mf = magnitude(f), mg = magnitude(g);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_LE(mg[i], mf[i]);
    EXPECT_EQ(mg[i], mf[i]);
    changed += g.vx[i] != f.vx[i];
  }
  EXPECT_GT(changed, 0u);
}

TEST(Perturb, FullDropoutZeroesField) {
  const auto f = scene_field(5);
  const auto g = perturb_field(f, NoiseModel{.dropout_rate = 1.0, .seed = 1});
  EXPECT_EQ(g, DirectionField(f.width(), f.height()));
}

TEST(Perturb, ZeroPixelsStayZeroAndSeedDetermines) {
  const auto f = scene_field(6);
  const NoiseModel noise{10.0, 0.05, 0.02, 9};
  const auto a = perturb_field(f, noise);
  EXPECT_EQ(a, perturb_field(f, noise));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.vx[i] == 0.0f && f.vy[i] == 0.0f) {
      EXPECT_EQ(a.vx[i], 0.0f);
      EXPECT_EQ(a.vy[i], 0.0f);
    }
    EXPECT_TRUE(std::isfinite(a.vx[i]) && std::isfinite(a.vy[i]));
  }
  EXPECT_NE(a, perturb_field(f, NoiseModel{10.0, 0.05, 0.02, 10}));
  EXPECT_THROW(perturb_field(f, NoiseModel{.dropout_rate = 1.5}), InputError);
}

}  // namespace
}  // namespace textfield
