#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "staghunt/environment.hpp"
#include "staghunt/llm_client.hpp"
#include "staghunt/observation.hpp"
#include "staghunt/prompting.hpp"

namespace staghunt {

enum class Hunter { Blue, Purple };

inline constexpr double kScriptedHareProbability = 0.7;

/// Per-episode state of the scripted hunter. The target is drawn once at
/// spawn and never revisited.
struct ScriptedPolicyState {
  TargetKind chosen_target = TargetKind::Hare;
  Cell target_cell;
};

/// Hare with probability 0.7, stag otherwise. A hare target is the hare
/// nearest the hunter's position at spawn.
ScriptedPolicyState scripted_reset(std::uint64_t seed, const GridState& state,
                                   Hunter hunter = Hunter::Purple);

/// One greedy Manhattan step: close the larger gap first, horizontal on
/// ties, STAY on arrival.
Action greedy_step(Cell from, Cell to) noexcept;

Action scripted_act(const ScriptedPolicyState& ps, const GridState& state,
                    Hunter hunter = Hunter::Purple) noexcept;

inline constexpr int kMaxQueries = 3;

struct ActOutcome {
  Action action = Action::Stay;
  std::string raw_reply;  // last reply received
  bool fallback = false;  // every reply was unusable; STAY substituted
  int queries = 0;
};

/// Asks the model for Blue's next move. Unparseable replies are re-asked
/// (up to kMaxQueries in total) before falling back to STAY.
/// TransportError and CredentialError propagate.
ActOutcome llm_act(LlmClient& client, const ModelSpec& spec, RiskProfile profile,
                   const GridState& state,
                   const PromptTemplates& templates = PromptTemplates::builtin());

struct DecideOutcome {
  std::optional<TargetKind> decision;  // nullopt: trial invalid
  std::string raw_reply;
  int queries = 0;
};

DecideOutcome llm_decide(LlmClient& client, const ModelSpec& spec, RiskProfile profile,
                         const FeatureVector& fv,
                         const PromptTemplates& templates = PromptTemplates::builtin());

// Blue policies --------------------------------------------------------------

struct ScriptedPolicy {};
struct LlmPolicy {
  ModelSpec spec;
  RiskProfile profile = RiskProfile::Neutral;
};
struct ReplayPolicy {
  std::vector<Action> actions;  // exhausted -> STAY
  std::string source;
};
struct HumanBridgePolicy {
  std::string session_id;
};

using PolicyKind = std::variant<ScriptedPolicy, LlmPolicy, ReplayPolicy, HumanBridgePolicy>;

/// Trajectory descriptor, e.g. {"kind":"llm","model":"...","profile":"seeking",...}.
nlohmann::json describe(const PolicyKind& kind);

struct BlueDecision {
  Action action = Action::Stay;
  std::optional<std::string> raw_reply;
  bool fallback = false;
};

/// Blue controller for batch episodes. One instance per episode.
class BluePolicy {
 public:
  virtual ~BluePolicy() = default;
  virtual void reset(std::uint64_t episode_seed, const GridState& initial) = 0;
  virtual BlueDecision act(const GridState& state) = 0;
};

/// Builds a fresh Blue controller. `client` is required for LlmPolicy.
/// HumanBridgePolicy is driven by the session service, not here.
std::unique_ptr<BluePolicy> make_blue_policy(const PolicyKind& kind, LlmClient* client,
                                             const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace staghunt
