#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "textfield/morphology.hpp"

namespace textfield {
namespace {

BinaryMask brute_dilate(const BinaryMask& m, int side) {
  const int r = side / 2;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      for (int dy = -r; dy <= r && !out(x, y); ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (m.contains(x + dx, y + dy) && m(x + dx, y + dy)) {
            out(x, y) = 1;
            break;
          }
        }
      }
    }
  }
  return out;
}

BinaryMask brute_erode(const BinaryMask& m, int side) {
  const int r = side / 2;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -r; dy <= r && all; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (!m.contains(x + dx, y + dy) || !m(x + dx, y + dy)) {
            all = false;
            break;
          }
        }
      }
      out(x, y) = all;
    }
  }
  return out;
}

// Closing on a canvas padded by the full kernel side, then cropped.
BinaryMask brute_close(const BinaryMask& m, int side) {
  const int pad = side;
  BinaryMask big(m.width() + 2 * pad, m.height() + 2 * pad);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) big(x + pad, y + pad) = m(x, y);
  }
  const auto closed = brute_erode(brute_dilate(big, side), side);
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) out(x, y) = closed(x + pad, y + pad);
  }
  return out;
}

TEST(Morphology, MatchesBruteForce) {
  std::mt19937 rng(9);
  for (int t = 0; t < 30; ++t) {
    const auto m = oracle::random_mask(rng, 23, 17, 0.1 + 0.08 * (t % 10));
    for (const int side : {1, 3, 5, 11}) {
      EXPECT_EQ(morph::dilate(m, side), brute_dilate(m, side));
      EXPECT_EQ(morph::erode(m, side), brute_erode(m, side));
      EXPECT_EQ(morph::close(m, side), brute_close(m, side));
    }
  }
}

TEST(Morphology, CloseContainsInputAndFillsHoles) {
  BinaryMask m(20, 20);
  for (int y = 2; y < 18; ++y) {
    for (int x = 2; x < 18; ++x) m(x, y) = !(x >= 8 && x < 11 && y >= 8 && y < 11);
  }
  const auto c = morph::close(m, 5);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_GE(c[i], m[i]);
  EXPECT_TRUE(c(9, 9));
}

TEST(Morphology, RejectsEvenOrNonPositiveSide) {
  const BinaryMask m(4, 4);
  EXPECT_THROW(morph::dilate(m, 2), InputError);
  EXPECT_THROW(morph::erode(m, 0), InputError);
  EXPECT_THROW(morph::close(m, -3), InputError);
}

TEST(Components, EightConnectedScanOrder) {
  BinaryMask m(6, 4);
  m(4, 0) = 1;
  m(0, 1) = 1;
  m(1, 2) = 1;  // diagonal to (0, 1)
  m(5, 3) = 1;
  const auto c = morph::label_components(m);
  EXPECT_EQ(c.count, 3);
  EXPECT_EQ(c.labels(4, 0), 1);
  EXPECT_EQ(c.labels(0, 1), 2);
  EXPECT_EQ(c.labels(1, 2), 2);
  EXPECT_EQ(c.labels(5, 3), 3);
}

// Union-find oracle: two pixels share a label iff they are 8-connected.
TEST(Components, MatchesUnionFind) {
  std::mt19937 rng(12);
  for (int t = 0; t < 30; ++t) {
    const auto m = oracle::random_mask(rng, 30, 20, 0.35);
    std::vector<int> parent(m.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
    const auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        if (!m(x, y)) continue;
        for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 1}, {0, 1}, {1, 1}}) {
          if (m.contains(x + dx, y + dy) && m(x + dx, y + dy)) {
            parent[find(int(m.index(x, y)))] = find(int(m.index(x + dx, y + dy)));
          }
        }
      }
    }
    const auto c = morph::label_components(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
      ASSERT_EQ(c.labels[i] != 0, m[i] != 0);
      for (std::size_t j = i + 1; j < m.size() && m[i]; j += 7) {
        if (!m[j]) continue;
        ASSERT_EQ(c.labels[i] == c.labels[j], find(int(i)) == find(int(j)));
      }
    }
  }
}

}  // namespace
}  // namespace textfield
