#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace staghunt {

inline constexpr int kGridSize = 5;

/// Grid coordinate. x grows rightward, y grows downward, origin top-left.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Row-major order: smaller y first, then smaller x.
constexpr bool row_major_less(Cell a, Cell b) noexcept {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

constexpr bool in_bounds(Cell c) noexcept {
  return c.x >= 0 && c.x < kGridSize && c.y >= 0 && c.y < kGridSize;
}

inline constexpr Cell kBlueStart{0, 0};
inline constexpr Cell kPurpleStart{kGridSize - 1, 0};

enum class TargetKind { Stag, Hare };

enum class Action { Up, Left, Down, Right, Stay };

inline constexpr std::array<Action, 5> kAllActions{Action::Up, Action::Left, Action::Down,
                                                   Action::Right, Action::Stay};

std::string_view to_string(TargetKind t) noexcept;  // "Stag" / "Hare"
std::string_view to_string(Action a) noexcept;      // "UP" ... "STAY"
std::optional<TargetKind> target_from_string(std::string_view s) noexcept;
std::optional<Action> action_from_string(std::string_view s) noexcept;

struct RewardPair {
  int blue = 0;
  int purple = 0;

  friend bool operator==(const RewardPair&, const RewardPair&) = default;
};

struct GridState {
  Cell blue = kBlueStart;
  Cell purple = kPurpleStart;
  Cell stag;
  std::array<Cell, 2> hares;
  int step = 0;
  std::optional<TargetKind> blue_capture;
  std::optional<TargetKind> purple_capture;

  friend bool operator==(const GridState&, const GridState&) = default;
};

struct EnvConfig {
  int grid_size = kGridSize;
  int max_steps = 40;
  /// Swap the off-diagonal payoffs to the textbook Stag Hunt
  /// (lone stag hunter gets 0, lone hare hunter gets 1).
  bool conventional_payoff = false;
  /// Cells where targets never spawn.
  std::vector<Cell> spawn_exclusion{kBlueStart, kPurpleStart};
};

/// Reads a JSON EnvConfig. Missing keys keep their defaults.
/// Throws ConfigError on unreadable files, bad values, or grid_size != 5.
EnvConfig load_env_config(const std::string& path);
void validate(const EnvConfig& config);

/// Moves one cell; moves that would leave the grid keep the current cell.
Cell apply_move(Cell pos, Action action) noexcept;

struct StepResult {
  GridState state;
  /// Set exactly when the returned state is terminal.
  std::optional<RewardPair> reward;
};

/// Turn-based two-hunter Stag Hunt on a 5x5 grid.
///
/// Blue moves first, then Purple. A hunter that steps onto the stag or a
/// hare latches that target and ignores every later action. The episode
/// ends when both hunters have latched (payoff from the latch pair) or
/// when the step counter reaches max_steps (payoff 0/0). Hunters may share
/// cells and captured hares stay on the board.
class StagHuntEnv {
 public:
  explicit StagHuntEnv(EnvConfig config = {});

  const EnvConfig& config() const noexcept { return config_; }

  /// Fresh episode: hunters on their start cells, stag and hares on three
  /// distinct random cells outside the spawn exclusion list.
  GridState new_scenario(std::uint64_t seed) const;

  /// Throws UsageError when `state` is already terminal.
  StepResult step(const GridState& state, Action blue_action, Action purple_action) const;

  RewardPair reward(TargetKind blue_target, TargetKind purple_target) const noexcept;

  bool is_terminal(const GridState& state) const noexcept;

  /// Payoff of a terminal state.
  RewardPair terminal_reward(const GridState& state) const;

 private:
  EnvConfig config_;
};

/// Validates an externally supplied layout (in bounds, distinct targets).
/// Throws ValidationError with a description of the first problem.
void validate_layout(const GridState& state);

}  // namespace staghunt
