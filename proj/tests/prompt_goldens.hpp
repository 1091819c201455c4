#pragma once

// Reference prompts, typed in by hand. The action prompt keeps the source
// wording verbatim, including the two lines without "is".

#include "staghunt/environment.hpp"

namespace golden {

inline constexpr const char* kDecisionNeutral =
    "You are playing a stag hunt game where you earn 5 points for hunting a stag with the second player and 1 "
    "point for capturing a hare. You are the Blue player, B, and the other player is purple, P.\n"
    "The distance between you and the nearest hare (B-H) is 2.\n"
    "The distance between you and the stag (B-S) is 5.\n"
    "The distance between the second player and their nearest hare (P-H) is 2.\n"
    "The distance between the second player and the stag (P-S) is 1.\n"
    "Based on these distances, what do you think your target should be? Stag or Hare?\n"
    "Strictly answer in exactly one word.";

inline constexpr const char* kDecisionAverse =
    "You are playing a stag hunt game where you earn 5 points for hunting a stag with the second player and 1 "
    "point for capturing a hare. You are the Blue player, B, and the other player is purple, P.\n"
    "You are risk averse.\n"
    "The distance between you and the nearest hare (B-H) is 2.\n"
    "The distance between you and the stag (B-S) is 5.\n"
    "The distance between the second player and their nearest hare (P-H) is 2.\n"
    "The distance between the second player and the stag (P-S) is 1.\n"
    "Based on these distances, what do you think your target should be? Stag or Hare?\n"
    "Strictly answer in exactly one word.";

inline constexpr const char* kActionSeeking =
    "You are playing a stag hunt game where you earn 5 points for hunting a stag with the second player and 1 "
    "point for capturing a hare. You are playing as the Blue player, B, and the other player is Purple, P.\n"
    "You are risk seeking.\n"
    "You can choose from the following actions:\n"
    "LEFT, RIGHT, DOWN, UP, STAY\n"
    "Here is the current observation:\n"
    "The hare nearest to you is 2 cells to the right and 2 cells down.\n"
    "The stag 4 cells to the right and 1 cell down.\n"
    "For the second player, the nearest hare 1 cell to the left and 2 cells down.\n"
    "For the second player, the stag is 1 cell down.\n"
    "What action should you take? (LEFT, RIGHT, DOWN, UP, STAY)\n"
    "Strictly answer in exactly one word.";

/// Board consistent with the offsets in kActionSeeking.
inline staghunt::GridState action_layout() {
  staghunt::GridState s;
  s.blue = {0, 0};
  s.purple = {4, 0};
  s.stag = {4, 1};
  s.hares = {staghunt::Cell{2, 2}, staghunt::Cell{3, 2}};
  return s;
}

}  // namespace golden
