#include "staghunt/environment.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "staghunt/errors.hpp"
#include "staghunt/rng.hpp"

namespace staghunt {

std::string_view to_string(TargetKind t) noexcept {
  return t == TargetKind::Stag ? "Stag" : "Hare";
}

std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::Up: return "UP";
    case Action::Left: return "LEFT";
    case Action::Down: return "DOWN";
    case Action::Right: return "RIGHT";
    case Action::Stay: return "STAY";
  }
  return "STAY";
}

std::optional<TargetKind> target_from_string(std::string_view s) noexcept {
  if (s == "Stag") return TargetKind::Stag;
  if (s == "Hare") return TargetKind::Hare;
  return std::nullopt;
}

std::optional<Action> action_from_string(std::string_view s) noexcept {
  for (Action a : kAllActions) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

void validate(const EnvConfig& config) {
  if (config.grid_size != kGridSize) {
    throw ConfigError("grid_size must be 5, got " + std::to_string(config.grid_size));
  }
  if (config.max_steps < 1) {
    throw ConfigError("max_steps must be positive, got " + std::to_string(config.max_steps));
  }
  for (const Cell& c : config.spawn_exclusion) {
    if (!in_bounds(c)) {
      throw ConfigError("spawn_exclusion cell (" + std::to_string(c.x) + "," +
                        std::to_string(c.y) + ") is outside the grid");
    }
  }
}

EnvConfig load_env_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  EnvConfig config;
  try {
    config.grid_size = j.value("grid_size", config.grid_size);
    config.max_steps = j.value("max_steps", config.max_steps);
    config.conventional_payoff = j.value("conventional_payoff", config.conventional_payoff);
    if (j.contains("spawn_exclusion")) {
      config.spawn_exclusion.clear();
      for (const auto& c : j.at("spawn_exclusion")) {
        config.spawn_exclusion.push_back({c.at("x").get<int>(), c.at("y").get<int>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  validate(config);
  return config;
}

Cell apply_move(Cell pos, Action action) noexcept {
  Cell next = pos;
  switch (action) {
    case Action::Up: --next.y; break;
    case Action::Down: ++next.y; break;
    case Action::Left: --next.x; break;
    case Action::Right: ++next.x; break;
    case Action::Stay: break;
  }
  return in_bounds(next) ? next : pos;
}

StagHuntEnv::StagHuntEnv(EnvConfig config) : config_(std::move(config)) { validate(config_); }

GridState StagHuntEnv::new_scenario(std::uint64_t seed) const {
  std::vector<Cell> free;
  for (int y = 0; y < kGridSize; ++y) {
    for (int x = 0; x < kGridSize; ++x) {
      const Cell c{x, y};
      const bool excluded =
          c == kBlueStart || c == kPurpleStart ||
          std::find(config_.spawn_exclusion.begin(), config_.spawn_exclusion.end(), c) !=
              config_.spawn_exclusion.end();
      if (!excluded) free.push_back(c);
    }
  }

  Rng rng(seed);
  auto draw = [&] {
    const auto i = static_cast<std::ptrdiff_t>(rng.uniform_below(free.size()));
    const Cell c = free[static_cast<std::size_t>(i)];
    free.erase(free.begin() + i);
    return c;
  };

  GridState s;
  s.stag = draw();
  s.hares[0] = draw();
  s.hares[1] = draw();
  return s;
}

namespace {

std::optional<TargetKind> target_at(const GridState& s, Cell c) {
  if (c == s.stag) return TargetKind::Stag;
  if (c == s.hares[0] || c == s.hares[1]) return TargetKind::Hare;
  return std::nullopt;
}

}  // namespace

StepResult StagHuntEnv::step(const GridState& state, Action blue_action,
                             Action purple_action) const {
  if (is_terminal(state)) throw UsageError("step() called on a terminal state");

  GridState next = state;
  if (!next.blue_capture) {
    next.blue = apply_move(next.blue, blue_action);
    next.blue_capture = target_at(next, next.blue);
  }
  if (!next.purple_capture) {
    next.purple = apply_move(next.purple, purple_action);
    next.purple_capture = target_at(next, next.purple);
  }
  ++next.step;

  StepResult result{next, std::nullopt};
  if (is_terminal(next)) result.reward = terminal_reward(next);
  return result;
}

RewardPair StagHuntEnv::reward(TargetKind blue_target, TargetKind purple_target) const noexcept {
  using enum TargetKind;
  if (blue_target == Stag && purple_target == Stag) return {5, 5};
  if (blue_target == Hare && purple_target == Hare) return {1, 1};
  const bool blue_alone_on_stag = blue_target == Stag;
  if (config_.conventional_payoff) {
    return blue_alone_on_stag ? RewardPair{0, 1} : RewardPair{1, 0};
  }
  return blue_alone_on_stag ? RewardPair{1, 0} : RewardPair{0, 1};
}

bool StagHuntEnv::is_terminal(const GridState& state) const noexcept {
  return (state.blue_capture && state.purple_capture) || state.step >= config_.max_steps;
}

RewardPair StagHuntEnv::terminal_reward(const GridState& state) const {
  if (!is_terminal(state)) throw UsageError("terminal_reward() on a non-terminal state");
  if (state.blue_capture && state.purple_capture) {
    return reward(*state.blue_capture, *state.purple_capture);
  }
  return {0, 0};
}

void validate_layout(const GridState& s) {
  auto cell_str = [](Cell c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  };
  const std::array<std::pair<const char*, Cell>, 5> entities{{{"blue", s.blue},
                                                              {"purple", s.purple},
                                                              {"stag", s.stag},
                                                              {"hare[0]", s.hares[0]},
                                                              {"hare[1]", s.hares[1]}}};
  for (const auto& [name, c] : entities) {
    if (!in_bounds(c)) throw ValidationError(std::string(name) + " " + cell_str(c) + " is out of bounds");
  }
  if (s.hares[0] == s.hares[1]) throw ValidationError("hares share cell " + cell_str(s.hares[0]));
  for (const Cell& h : s.hares) {
    if (h == s.stag) throw ValidationError("stag and a hare share cell " + cell_str(h));
  }
}

}  // namespace staghunt
