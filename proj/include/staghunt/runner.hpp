#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "staghunt/agents.hpp"
#include "staghunt/environment.hpp"
#include "staghunt/llm_client.hpp"
#include "staghunt/metrics.hpp"
#include "staghunt/observation.hpp"
#include "staghunt/prompting.hpp"
#include "staghunt/rng.hpp"
#include "staghunt/trajectory.hpp"

namespace staghunt {

// Scenarios -------------------------------------------------------------------

/// A static board for the Stag/Hare query.
///
/// File format: one JSON object per line; blank lines and lines starting
/// with '#' are skipped.
///
///   {"id": "c01",
///    "blue": {"x":0,"y":0}, "purple": {"x":4,"y":0}, "stag": {"x":4,"y":1},
///    "hares": [{"x":2,"y":0}, {"x":0,"y":2}],
///    "label": "Stag",                               (optional)
///    "features": {"bh":2, "bs":5, "ph":2, "ps":1}}  (optional)
///
/// When "features" is present it must agree with the positions.
struct ScenarioConfig {
  std::string id;
  GridState layout;  // step 0, no latches
  std::optional<TargetKind> judge_label;
  std::optional<FeatureVector> precomputed;

  FeatureVector features() const { return precomputed ? *precomputed : feature_vector(layout); }
};

/// Throws ValidationError naming the line and field on bad rows or
/// feature mismatches.
std::vector<ScenarioConfig> parse_scenarios(std::istream& in, const std::string& source = "<input>");
std::vector<ScenarioConfig> load_scenarios(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& s);

// Experiment 1: alignment with judge labels -----------------------------------

struct DecisionTrial {
  std::string scenario_id;
  FeatureVector features;
  std::optional<TargetKind> label;
  std::optional<TargetKind> prediction;  // nullopt: invalid trial
  std::string raw_reply;
  int queries = 0;
};

nlohmann::json to_json(const DecisionTrial& t);

using TrialSink = std::function<void(const DecisionTrial&)>;

struct Exp1Result {
  std::vector<DecisionTrial> trials;
  MetricsReport report;
};

/// Neutral Stag/Hare query on every scenario, scored against judge labels.
/// Every scenario yields exactly one trial (a prediction or an invalid
/// marker); `sink` sees each trial as soon as it completes, so partial
/// results survive a TransportError. Throws ValidationError if a scenario
/// has no label.
Exp1Result run_experiment1(const std::vector<ScenarioConfig>& scenarios, LlmClient& client,
                           const ModelSpec& spec, const TrialSink& sink = {},
                           const PromptTemplates& templates = PromptTemplates::builtin());

// Experiment 2: risk steering --------------------------------------------------

struct ProfileRun {
  RiskProfile profile = RiskProfile::Neutral;
  std::vector<DecisionTrial> trials;
  RiskReport report;
};

std::vector<ProfileRun> run_experiment2(const std::vector<ScenarioConfig>& scenarios, LlmClient& client,
                                        const ModelSpec& spec, const std::vector<RiskProfile>& profiles,
                                        bool count_invalid_in_total = false, const TrialSink& sink = {},
                                        const PromptTemplates& templates = PromptTemplates::builtin());

/// phi per profile, one line each, with the band it falls in.
std::string format_risk_summary(const std::string& model, const std::vector<ProfileRun>& runs);

// Experiment 3: in-the-loop episodes -------------------------------------------

/// Seed of episode `index` in a run with master seed `master`.
inline std::uint64_t episode_seed(std::uint64_t master, std::uint64_t index) { return split_seed(master, index); }
inline std::uint64_t purple_seed(std::uint64_t episode) { return split_seed(episode, 1); }

nlohmann::json scripted_purple_descriptor();

/// Plays one episode against the scripted Purple hunter. TransportError
/// from the Blue policy ends the episode as Aborted.
Trajectory run_episode(const StagHuntEnv& env, BluePolicy& blue, std::uint64_t seed, std::string episode_id,
                       nlohmann::json blue_descriptor);

struct BatchSpec {
  PolicyKind blue = ScriptedPolicy{};
  std::uint64_t master_seed = 0;
  int n_episodes = 1;
  LlmClient* client = nullptr;  // required for LlmPolicy
  const PromptTemplates* templates = &PromptTemplates::builtin();
};

/// Reference implementation: episodes one after another.
std::vector<Trajectory> run_episodes_serial(const StagHuntEnv& env, const BatchSpec& spec);

/// OpenMP over episodes. Each episode owns its policy and RNG streams, so
/// the result is identical to run_episodes_serial.
std::vector<Trajectory> run_episodes_parallel(const StagHuntEnv& env, const BatchSpec& spec);

struct Exp3Summary {
  int episodes = 0;
  int aborted = 0;
  int timeouts = 0;
  int captures = 0;
  double mean_length = 0.0;  // over non-aborted episodes
  int max_length = 0;
  std::map<std::string, int> outcomes;  // "Stag/Hare" = blue/purple latches
  RewardPair reward_totals;
  int fallbacks = 0;
};

Exp3Summary summarize(const std::vector<Trajectory>& episodes);
nlohmann::json to_json(const Exp3Summary& s);

struct Exp3Result {
  TrajectoryDataset dataset;
  Exp3Summary summary;
};

Exp3Result run_experiment3(const StagHuntEnv& env, const BatchSpec& spec, bool parallel = true);

}  // namespace staghunt
