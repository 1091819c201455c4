#include "staghunt/observation.hpp"

#include <charconv>
#include <cstdlib>

#include "staghunt/errors.hpp"

namespace staghunt {

NearestHare nearest_hare(Cell hunter, std::span<const Cell> hares) {
  if (hares.empty()) throw UsageError("nearest_hare() needs at least one hare");
  NearestHare best{hares.front(), manhattan(hunter, hares.front())};
  for (const Cell& h : hares.subspan(1)) {
    const int d = manhattan(hunter, h);
    if (d < best.distance || (d == best.distance && row_major_less(h, best.cell))) {
      best = {h, d};
    }
  }
  return best;
}

FeatureVector feature_vector(const GridState& s) {
  return {
      .bh = nearest_hare(s.blue, s.hares).distance,
      .bs = manhattan(s.blue, s.stag),
      .ph = nearest_hare(s.purple, s.hares).distance,
      .ps = manhattan(s.purple, s.stag),
  };
}

namespace {

std::string cells(int n) { return std::to_string(n) + (n == 1 ? " cell" : " cells"); }

constexpr std::string_view kHere = "at your position";

// Parses "<n> cell[s]<suffix>" where suffix is one of the direction tails.
// Returns the signed component and the axis (true = horizontal).
struct Component {
  int value;
  bool horizontal;
};

std::optional<Component> parse_component(std::string_view part) {
  int n = 0;
  auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), n);
  if (ec != std::errc{} || n <= 0) return std::nullopt;
  std::string_view rest(ptr, static_cast<std::size_t>(part.data() + part.size() - ptr));
  const std::string_view unit = n == 1 ? " cell" : " cells";
  if (!rest.starts_with(unit)) return std::nullopt;
  rest.remove_prefix(unit.size());
  if (rest == " to the right") return Component{n, true};
  if (rest == " to the left") return Component{-n, true};
  if (rest == " down") return Component{n, false};
  if (rest == " up") return Component{-n, false};
  return std::nullopt;
}

}  // namespace

std::string offset_phrase(RelativeOffset o) {
  std::string horizontal;
  std::string vertical;
  if (o.dx != 0) horizontal = cells(std::abs(o.dx)) + (o.dx > 0 ? " to the right" : " to the left");
  if (o.dy != 0) vertical = cells(std::abs(o.dy)) + (o.dy > 0 ? " down" : " up");
  if (!horizontal.empty() && !vertical.empty()) return horizontal + " and " + vertical;
  if (!horizontal.empty()) return horizontal;
  if (!vertical.empty()) return vertical;
  return std::string(kHere);
}

std::optional<RelativeOffset> parse_offset_phrase(std::string_view phrase) {
  if (phrase == kHere) return RelativeOffset{0, 0};
  constexpr std::string_view sep = " and ";
  const auto at = phrase.find(sep);
  if (at == std::string_view::npos) {
    const auto c = parse_component(phrase);
    if (!c) return std::nullopt;
    return c->horizontal ? RelativeOffset{c->value, 0} : RelativeOffset{0, c->value};
  }
  const auto first = parse_component(phrase.substr(0, at));
  const auto second = parse_component(phrase.substr(at + sep.size()));
  if (!first || !second || !first->horizontal || second->horizontal) return std::nullopt;
  return RelativeOffset{first->value, second->value};
}

}  // namespace staghunt
