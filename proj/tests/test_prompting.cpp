#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "prompt_goldens.hpp"
#include "staghunt/errors.hpp"
#include "staghunt/prompting.hpp"

using namespace staghunt;

TEST(Prompting, DecisionGoldenNeutral) {
  EXPECT_EQ(render_decision_prompt({2, 5, 2, 1}, RiskProfile::Neutral), golden::kDecisionNeutral);
}

TEST(Prompting, DecisionGoldenAverse) {
  EXPECT_EQ(render_decision_prompt({2, 5, 2, 1}, RiskProfile::RiskAverse), golden::kDecisionAverse);
}

TEST(Prompting, ActionGoldenSeeking) {
  EXPECT_EQ(render_action_prompt(golden::action_layout(), RiskProfile::RiskSeeking), golden::kActionSeeking);
}

TEST(Prompting, SeekingDecisionHasRiskLine) {
  const std::string p = render_decision_prompt({1, 1, 1, 1}, RiskProfile::RiskSeeking);
  EXPECT_NE(p.find("\nYou are risk seeking.\n"), std::string::npos);
}

TEST(Prompting, RenderTemplateErrors) {
  EXPECT_EQ(render_template("a {{x}} b", {{"x", "1"}}), "a 1 b");
  EXPECT_THROW(render_template("a {{y}} b", {{"x", "1"}}), ConfigError);
  EXPECT_THROW(render_template("a {{x b", {{"x", "1"}}), ConfigError);
  EXPECT_EQ(render_template("a\n{{x}}\nb", {{"x", ""}}), "a\nb");
}

TEST(Prompting, LoadTemplatesFromDirectory) {
  const PromptTemplates t = PromptTemplates::load(STAGHUNT_TEMPLATE_DIR, "v1");
  EXPECT_EQ(t.version, "v1");
  EXPECT_EQ(render_decision_prompt({2, 5, 2, 1}, RiskProfile::Neutral, t), golden::kDecisionNeutral);
  EXPECT_THROW(PromptTemplates::load(STAGHUNT_TEMPLATE_DIR, "nope"), ConfigError);
}

TEST(Prompting, CustomTemplateVersion) {
  const auto dir = std::filesystem::temp_directory_path() / "staghunt_tmpl";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "decision_v2.txt") << "B-H={{bh}} B-S={{bs}} P-H={{ph}} P-S={{ps}}\n{{risk_line}}\n";
  std::ofstream(dir / "action_v2.txt") << "{{blue_hare}}|{{blue_stag}}|{{purple_hare}}|{{purple_stag}}\n";
  const PromptTemplates t = PromptTemplates::load(dir.string(), "v2");
  EXPECT_EQ(render_decision_prompt({1, 2, 3, 4}, RiskProfile::Neutral, t), "B-H=1 B-S=2 P-H=3 P-S=4");
  EXPECT_EQ(render_decision_prompt({1, 2, 3, 4}, RiskProfile::RiskAverse, t),
            "B-H=1 B-S=2 P-H=3 P-S=4\nYou are risk averse.");
  std::filesystem::remove_all(dir);
}

TEST(Prompting, NormalizeReply) {
  EXPECT_EQ(normalize_reply("  \"Stag\".\n"), "stag");
  EXPECT_EQ(normalize_reply("**RIGHT**"), "right");
  EXPECT_EQ(normalize_reply("\xE2\x80\x9CHare\xE2\x80\x9D"), "hare");
}

TEST(Prompting, ParseDecision) {
  EXPECT_EQ(parse_decision("Stag"), TargetKind::Stag);
  EXPECT_EQ(parse_decision("hare."), TargetKind::Hare);
  EXPECT_EQ(parse_decision(" \"HARE\" "), TargetKind::Hare);
  EXPECT_THROW(parse_decision("I would choose the stag"), NonconformingReply);
  EXPECT_THROW(parse_decision(""), NonconformingReply);
}

TEST(Prompting, ParseAction) {
  EXPECT_EQ(parse_action("RIGHT"), Action::Right);
  EXPECT_EQ(parse_action("left"), Action::Left);
  EXPECT_EQ(parse_action("*stay*"), Action::Stay);
  EXPECT_THROW(parse_action("NORTH"), NonconformingReply);
  try {
    parse_action("go up");
    FAIL();
  } catch (const NonconformingReply& e) {
    EXPECT_EQ(e.raw(), "go up");
  }
}

TEST(Prompting, ProfileNames) {
  EXPECT_EQ(profile_from_string("averse"), RiskProfile::RiskAverse);
  EXPECT_EQ(profile_from_string("seeking"), RiskProfile::RiskSeeking);
  EXPECT_EQ(profile_from_string("neutral"), RiskProfile::Neutral);
  EXPECT_FALSE(profile_from_string("bold"));
  EXPECT_EQ(risk_line(RiskProfile::Neutral), "");
}
