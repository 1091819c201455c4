#include <gtest/gtest.h>

#include <vector>

#include "staghunt/errors.hpp"
#include "staghunt/observation.hpp"

using namespace staghunt;

TEST(Observation, FeatureVectorOfExampleLayout) {
  GridState s;
  s.blue = {0, 0};
  s.purple = {4, 0};
  s.stag = {4, 1};
  s.hares = {Cell{2, 2}, Cell{3, 2}};
  EXPECT_EQ(feature_vector(s), (FeatureVector{4, 5, 3, 1}));
}

TEST(Observation, NearestHareTieBreaksRowMajor) {
  const std::vector<Cell> a{{3, 2}, {2, 3}};
  const NearestHare n = nearest_hare({2, 2}, a);
  EXPECT_EQ(n.distance, 1);
  EXPECT_EQ(n.cell, (Cell{3, 2}));

  const std::vector<Cell> b{{1, 2}, {2, 1}};
  EXPECT_EQ(nearest_hare({2, 2}, b).cell, (Cell{2, 1}));

  const std::vector<Cell> c{{3, 1}, {1, 1}};
  EXPECT_EQ(nearest_hare({2, 2}, c).cell, (Cell{1, 1}));
}

TEST(Observation, NearestHareEmptyThrows) {
  EXPECT_THROW(nearest_hare({0, 0}, std::span<const Cell>{}), UsageError);
}

TEST(Observation, ManhattanTriangleInequality) {
  for (int i = 0; i < 625; ++i) {
    const Cell a{i % 5, (i / 5) % 5}, b{(i / 25) % 5, (i / 3) % 5}, c{(i / 7) % 5, (i / 11) % 5};
    EXPECT_LE(manhattan(a, c), manhattan(a, b) + manhattan(b, c));
    EXPECT_EQ(manhattan(a, b), manhattan(b, a));
  }
}

TEST(Observation, OffsetPhrases) {
  EXPECT_EQ(offset_phrase({2, 2}), "2 cells to the right and 2 cells down");
  EXPECT_EQ(offset_phrase({4, 1}), "4 cells to the right and 1 cell down");
  EXPECT_EQ(offset_phrase({-1, 2}), "1 cell to the left and 2 cells down");
  EXPECT_EQ(offset_phrase({0, 1}), "1 cell down");
  EXPECT_EQ(offset_phrase({0, -3}), "3 cells up");
  EXPECT_EQ(offset_phrase({-2, 0}), "2 cells to the left");
  EXPECT_EQ(offset_phrase({0, 0}), "at your position");
}

TEST(Observation, OffsetPhraseRoundTrip) {
  for (int dx = -4; dx <= 4; ++dx) {
    for (int dy = -4; dy <= 4; ++dy) {
      const RelativeOffset o{dx, dy};
      EXPECT_EQ(parse_offset_phrase(offset_phrase(o)), o) << offset_phrase(o);
    }
  }
}

TEST(Observation, ParseOffsetRejectsGarbage) {
  EXPECT_FALSE(parse_offset_phrase("three cells left"));
  EXPECT_FALSE(parse_offset_phrase("1 cells down"));
  EXPECT_FALSE(parse_offset_phrase("0 cells to the right"));
  EXPECT_FALSE(parse_offset_phrase(""));
}
