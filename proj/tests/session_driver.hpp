#pragma once

#include <string>

#include "staghunt/agents.hpp"
#include "staghunt/observation.hpp"
#include "staghunt/session.hpp"

namespace driver {

inline const char* key_for(staghunt::Action a) {
  switch (a) {
    case staghunt::Action::Up: return "W";
    case staghunt::Action::Left: return "A";
    case staghunt::Action::Down: return "S";
    case staghunt::Action::Right: return "D";
    case staghunt::Action::Stay: break;
  }
  return "X";
}

/// A player who walks to the nearest hare.
inline const char* next_key(const staghunt::GridState& s) {
  const auto target = staghunt::nearest_hare(s.blue, s.hares).cell;
  return key_for(staghunt::greedy_step(s.blue, target));
}

}  // namespace driver
