#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "staghunt/environment.hpp"

namespace staghunt {

/// Relative-distance encoding of a board: Manhattan distances from each
/// hunter to its own nearest hare and to the stag.
struct FeatureVector {
  int bh = 0;  // blue -> nearest hare
  int bs = 0;  // blue -> stag
  int ph = 0;  // purple -> nearest hare
  int ps = 0;  // purple -> stag

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Signed displacement between two cells (dx > 0 is right, dy > 0 is down).
struct RelativeOffset {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const RelativeOffset&, const RelativeOffset&) = default;
};

constexpr int manhattan(Cell a, Cell b) noexcept {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

constexpr RelativeOffset offset_between(Cell from, Cell to) noexcept {
  return {to.x - from.x, to.y - from.y};
}

struct NearestHare {
  Cell cell;
  int distance = 0;
};

/// Closest hare to `hunter`; equidistant hares resolve in row-major order.
/// Throws UsageError for an empty list.
NearestHare nearest_hare(Cell hunter, std::span<const Cell> hares);

FeatureVector feature_vector(const GridState& state);

/// English rendering of an offset, e.g. "2 cells to the right and 1 cell down".
/// Horizontal part first; a zero component is omitted; (0,0) renders as
/// "at your position".
std::string offset_phrase(RelativeOffset offset);
inline std::string offset_phrase(Cell from, Cell to) { return offset_phrase(offset_between(from, to)); }

/// Inverse of offset_phrase. Returns nullopt for anything outside its grammar.
std::optional<RelativeOffset> parse_offset_phrase(std::string_view phrase);

}  // namespace staghunt
