#include "staghunt/agents.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>

#include "staghunt/errors.hpp"
#include "staghunt/rng.hpp"

namespace staghunt {

ScriptedPolicyState scripted_reset(std::uint64_t seed, const GridState& state, Hunter hunter) {
  Rng rng(seed);
  const Cell self = hunter == Hunter::Purple ? state.purple : state.blue;
  if (rng.bernoulli(kScriptedHareProbability)) {
    return {TargetKind::Hare, nearest_hare(self, state.hares).cell};
  }
  return {TargetKind::Stag, state.stag};
}

Action greedy_step(Cell from, Cell to) noexcept {
  const int dx = to.x - from.x;
  const int dy = to.y - from.y;
  if (dx == 0 && dy == 0) return Action::Stay;
  if (std::abs(dx) >= std::abs(dy)) return dx > 0 ? Action::Right : Action::Left;
  return dy > 0 ? Action::Down : Action::Up;
}

Action scripted_act(const ScriptedPolicyState& ps, const GridState& state, Hunter hunter) noexcept {
  return greedy_step(hunter == Hunter::Purple ? state.purple : state.blue, ps.target_cell);
}

ActOutcome llm_act(LlmClient& client, const ModelSpec& spec, RiskProfile profile,
                   const GridState& state, const PromptTemplates& templates) {
  const std::string prompt = render_action_prompt(state, profile, templates);
  ActOutcome out;
  for (int attempt = 0; attempt < kMaxQueries; ++attempt) {
    out.raw_reply = client.complete(spec, prompt, attempt);
    out.queries = attempt + 1;
    try {
      out.action = parse_action(out.raw_reply);
      return out;
    } catch (const NonconformingReply& e) {
      spdlog::warn("step {}: {} (query {}/{})", state.step, e.what(), attempt + 1, kMaxQueries);
    }
  }
  out.action = Action::Stay;
  out.fallback = true;
  return out;
}

DecideOutcome llm_decide(LlmClient& client, const ModelSpec& spec, RiskProfile profile,
                         const FeatureVector& fv, const PromptTemplates& templates) {
  const std::string prompt = render_decision_prompt(fv, profile, templates);
  DecideOutcome out;
  for (int attempt = 0; attempt < kMaxQueries; ++attempt) {
    out.raw_reply = client.complete(spec, prompt, attempt);
    out.queries = attempt + 1;
    try {
      out.decision = parse_decision(out.raw_reply);
      return out;
    } catch (const NonconformingReply& e) {
      spdlog::warn("{} (query {}/{})", e.what(), attempt + 1, kMaxQueries);
    }
  }
  return out;
}

nlohmann::json describe(const PolicyKind& kind) {
  struct Visitor {
    nlohmann::json operator()(const ScriptedPolicy&) const {
      return {{"kind", "scripted"}, {"hare_probability", kScriptedHareProbability}};
    }
    nlohmann::json operator()(const LlmPolicy& p) const {
      return {{"kind", "llm"},
              {"model", p.spec.name},
              {"endpoint", p.spec.endpoint},
              {"profile", to_string(p.profile)},
              {"temperature", p.spec.params.temperature},
              {"top_p", p.spec.params.top_p},
              {"max_tokens", p.spec.params.max_tokens}};
    }
    nlohmann::json operator()(const ReplayPolicy& p) const {
      return {{"kind", "replay"}, {"source", p.source}};
    }
    nlohmann::json operator()(const HumanBridgePolicy& p) const {
      return {{"kind", "human"}, {"session_id", p.session_id}};
    }
  };
  return std::visit(Visitor{}, kind);
}

namespace {

class ScriptedBlue final : public BluePolicy {
 public:
  void reset(std::uint64_t episode_seed, const GridState& initial) override {
    state_ = scripted_reset(split_seed(episode_seed, 2), initial, Hunter::Blue);
  }
  BlueDecision act(const GridState& s) override { return {scripted_act(state_, s, Hunter::Blue)}; }

 private:
  ScriptedPolicyState state_;
};

class LlmBlue final : public BluePolicy {
 public:
  LlmBlue(LlmClient& client, LlmPolicy policy, const PromptTemplates& templates)
      : client_(client), policy_(std::move(policy)), templates_(templates) {}

  void reset(std::uint64_t, const GridState&) override {}
  BlueDecision act(const GridState& s) override {
    ActOutcome o = llm_act(client_, policy_.spec, policy_.profile, s, templates_);
    return {o.action, std::move(o.raw_reply), o.fallback};
  }

 private:
  LlmClient& client_;
  LlmPolicy policy_;
  const PromptTemplates& templates_;
};

class ReplayBlue final : public BluePolicy {
 public:
  explicit ReplayBlue(std::vector<Action> actions) : actions_(std::move(actions)) {}
  void reset(std::uint64_t, const GridState&) override { next_ = 0; }
  BlueDecision act(const GridState&) override {
    return {next_ < actions_.size() ? actions_[next_++] : Action::Stay};
  }

 private:
  std::vector<Action> actions_;
  std::size_t next_ = 0;
};

}  // namespace

std::unique_ptr<BluePolicy> make_blue_policy(const PolicyKind& kind, LlmClient* client,
                                             const PromptTemplates& templates) {
  if (const auto* llm = std::get_if<LlmPolicy>(&kind)) {
    if (client == nullptr) throw UsageError("an LLM-backed policy needs a client");
    return std::make_unique<LlmBlue>(*client, *llm, templates);
  }
  if (const auto* replay = std::get_if<ReplayPolicy>(&kind)) {
    return std::make_unique<ReplayBlue>(replay->actions);
  }
  if (std::holds_alternative<ScriptedPolicy>(kind)) return std::make_unique<ScriptedBlue>();
  throw UsageError("human-controlled hunters are driven through the session service");
}

}  // namespace staghunt
