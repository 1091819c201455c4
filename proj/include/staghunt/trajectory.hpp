#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "staghunt/environment.hpp"

namespace staghunt {

// Line-delimited trajectory files.
//
// One JSON object per line, discriminated by "kind":
//
//   manifest  first line; run metadata (producer, seed, model, templates, env)
//   episode   opens an episode: ids, seeds, policy descriptors, initial state
//   step      one transition: state before the move, both actions, the raw
//             model reply (null for non-LLM hunters), fallback flag
//   end       closes an episode: outcome, final state, reward (null unless
//             the episode resolved)
//
// Step records of an episode are contiguous from step 0. Runner output and
// session exports share this schema; only the policy descriptors differ.

inline constexpr std::string_view kTrajectoryFormat = "staghunt-trajectory/1";

nlohmann::json to_json(Cell c);
nlohmann::json to_json(const GridState& s);
nlohmann::json to_json(const RewardPair& r);
Cell cell_from_json(const nlohmann::json& j);
GridState state_from_json(const nlohmann::json& j);
RewardPair reward_from_json(const nlohmann::json& j);

struct StepRecord {
  int step = 0;
  GridState state;  // before the move
  Action blue_action = Action::Stay;
  Action purple_action = Action::Stay;
  std::optional<std::string> raw_reply;
  bool fallback = false;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

enum class EpisodeOutcome { Capture, Timeout, Aborted, Partial };

std::string_view to_string(EpisodeOutcome o) noexcept;
std::optional<EpisodeOutcome> outcome_from_string(std::string_view s) noexcept;

struct Trajectory {
  std::string episode_id;
  std::uint64_t seed = 0;         // new_scenario(seed) gives initial_state
  std::uint64_t purple_seed = 0;  // scripted_reset seed for Purple
  nlohmann::json blue_policy;
  nlohmann::json purple_policy;
  GridState initial_state;
  std::vector<StepRecord> records;
  GridState final_state;
  std::optional<RewardPair> reward;
  EpisodeOutcome outcome = EpisodeOutcome::Partial;
  std::optional<std::string> error;

  int length() const noexcept { return static_cast<int>(records.size()); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct RunManifest {
  std::string producer;  // "runner" or "session"
  std::uint64_t seed = 0;
  std::string template_version;
  nlohmann::json model;  // null when no model was queried
  EnvConfig env;
  nlohmann::json extra = nlohmann::json::object();
};

struct TrajectoryDataset {
  RunManifest manifest;
  std::vector<Trajectory> episodes;
};

void write_jsonl(std::ostream& out, const TrajectoryDataset& dataset);
std::string to_jsonl(const TrajectoryDataset& dataset);

/// Strict reader for write_jsonl output. Throws ValidationError naming the
/// offending line on malformed input or out-of-order records.
TrajectoryDataset read_jsonl(std::istream& in);
TrajectoryDataset read_jsonl_file(const std::string& path);

/// Re-runs the recorded actions from the recorded seed and compares every
/// state. Returns a description of the first divergence, or nullopt.
std::optional<std::string> replay_mismatch(const Trajectory& t, const StagHuntEnv& env);

}  // namespace staghunt
