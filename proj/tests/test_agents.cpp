#include <gtest/gtest.h>

#include "oracles.hpp"
#include "staghunt/agents.hpp"
#include "staghunt/errors.hpp"
#include "staghunt/runner.hpp"

using namespace staghunt;

namespace {

std::shared_ptr<FunctionTransport> canned(std::vector<std::string> replies, int* calls) {
  return std::make_shared<FunctionTransport>([replies, calls](const ModelSpec&, const std::string&) {
    const int i = (*calls)++;
    return replies[static_cast<std::size_t>(std::min<int>(i, static_cast<int>(replies.size()) - 1))];
  });
}

ClientOptions quiet() {
  ClientOptions o;
  o.sleeper = [](std::chrono::milliseconds) {};
  return o;
}

}  // namespace

TEST(Scripted, GreedyStepOrdering) {
  EXPECT_EQ(greedy_step({0, 0}, {2, 2}), Action::Right);  // tie -> horizontal
  EXPECT_EQ(greedy_step({0, 0}, {1, 3}), Action::Down);
  EXPECT_EQ(greedy_step({4, 4}, {1, 3}), Action::Left);
  EXPECT_EQ(greedy_step({2, 4}, {2, 0}), Action::Up);
  EXPECT_EQ(greedy_step({2, 2}, {2, 2}), Action::Stay);
}

TEST(Scripted, GreedyStepMatchesOracleWalk) {
  for (int a = 0; a < 25; ++a) {
    for (int b = 0; b < 25; ++b) {
      Cell from{a % 5, a / 5};
      const Cell to{b % 5, b / 5};
      const auto path = oracle::greedy_path({from.x, from.y}, {to.x, to.y});
      for (const oracle::Pos& p : path) {
        from = apply_move(from, greedy_step(from, to));
        ASSERT_EQ(from, (Cell{p.x, p.y}));
      }
      EXPECT_EQ(from, to);
    }
  }
}

TEST(Scripted, ResetIsSeededAndPicksNearestHare) {
  StagHuntEnv env;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const GridState s = env.new_scenario(seed);
    const ScriptedPolicyState a = scripted_reset(seed, s);
    const ScriptedPolicyState b = scripted_reset(seed, s);
    EXPECT_EQ(a.chosen_target, b.chosen_target);
    EXPECT_EQ(a.target_cell, b.target_cell);
    if (a.chosen_target == TargetKind::Stag) {
      EXPECT_EQ(a.target_cell, s.stag);
    } else {
      EXPECT_EQ(a.target_cell, nearest_hare(s.purple, s.hares).cell);
    }
    const ScriptedPolicyState blue = scripted_reset(seed, s, Hunter::Blue);
    if (blue.chosen_target == TargetKind::Hare) EXPECT_EQ(blue.target_cell, nearest_hare(s.blue, s.hares).cell);
  }
}

TEST(Scripted, ActHeadsForTarget) {
  GridState s;
  s.blue = {0, 0};
  s.purple = {4, 0};
  s.stag = {1, 3};
  s.hares = {Cell{2, 2}, Cell{3, 4}};
  ScriptedPolicyState p{TargetKind::Stag, s.stag};
  EXPECT_EQ(scripted_act(p, s), Action::Left);
  EXPECT_EQ(scripted_act(p, s, Hunter::Blue), Action::Down);
}

TEST(LlmAgent, ActParsesReply) {
  int calls = 0;
  LlmClient client(canned({"  Down. "}, &calls), quiet());
  const ActOutcome o = llm_act(client, mock_model_spec(), RiskProfile::Neutral, StagHuntEnv{}.new_scenario(1));
  EXPECT_EQ(o.action, Action::Down);
  EXPECT_FALSE(o.fallback);
  EXPECT_EQ(o.queries, 1);
}

TEST(LlmAgent, FallsBackToStayAfterThreeBadReplies) {
  int calls = 0;
  LlmClient client(canned({"I think north", "go", "umm"}, &calls), quiet());
  const ActOutcome o = llm_act(client, mock_model_spec(), RiskProfile::Neutral, StagHuntEnv{}.new_scenario(1));
  EXPECT_EQ(o.action, Action::Stay);
  EXPECT_TRUE(o.fallback);
  EXPECT_EQ(o.queries, 3);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(o.raw_reply, "umm");
}

TEST(LlmAgent, RecoversOnSecondQuery) {
  int calls = 0;
  LlmClient client(canned({"Let me think", "LEFT"}, &calls), quiet());
  const ActOutcome o = llm_act(client, mock_model_spec(), RiskProfile::Neutral, StagHuntEnv{}.new_scenario(1));
  EXPECT_EQ(o.action, Action::Left);
  EXPECT_FALSE(o.fallback);
  EXPECT_EQ(o.queries, 2);
}

TEST(LlmAgent, DecideInvalidAfterThreeBadReplies) {
  int calls = 0;
  LlmClient client(canned({"Both", "Neither", "Stag or Hare"}, &calls), quiet());
  const DecideOutcome o = llm_decide(client, mock_model_spec(), RiskProfile::Neutral, {1, 2, 3, 4});
  EXPECT_FALSE(o.decision);
  EXPECT_EQ(o.queries, 3);
}

TEST(LlmAgent, TransportErrorPropagates) {
  auto t = std::make_shared<FunctionTransport>(
      [](const ModelSpec&, const std::string&) -> std::string { throw TransportError("down"); });
  LlmClient client(t, quiet());
  EXPECT_THROW(llm_decide(client, mock_model_spec(), RiskProfile::Neutral, {1, 2, 3, 4}), TransportError);
}

TEST(Policies, DescribeAndFactory) {
  LlmPolicy llm{mock_model_spec(), RiskProfile::RiskSeeking};
  const auto d = describe(llm);
  EXPECT_EQ(d.at("kind"), "llm");
  EXPECT_EQ(d.at("profile"), "seeking");
  EXPECT_EQ(describe(ScriptedPolicy{}).at("kind"), "scripted");
  EXPECT_THROW(make_blue_policy(HumanBridgePolicy{"s1"}, nullptr), UsageError);
  EXPECT_THROW(make_blue_policy(llm, nullptr), UsageError);

  auto replay = make_blue_policy(ReplayPolicy{{Action::Right, Action::Down}, "test"}, nullptr);
  const GridState s = StagHuntEnv{}.new_scenario(0);
  replay->reset(0, s);
  EXPECT_EQ(replay->act(s).action, Action::Right);
  EXPECT_EQ(replay->act(s).action, Action::Down);
  EXPECT_EQ(replay->act(s).action, Action::Stay);
}
