#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "staghunt/environment.hpp"
#include "staghunt/observation.hpp"

namespace staghunt {

enum class RiskProfile { Neutral, RiskAverse, RiskSeeking };

enum class PromptKind { StaticDecision, InLoopAction };

/// "You are risk averse." / "You are risk seeking." / "" for Neutral.
std::string_view risk_line(RiskProfile profile) noexcept;

/// CLI / file spelling: "neutral", "averse", "seeking".
std::string_view to_string(RiskProfile profile) noexcept;
std::optional<RiskProfile> profile_from_string(std::string_view s) noexcept;

struct PromptTemplate {
  std::string text;
};

struct PromptTemplates {
  std::string version;  // recorded in run manifests
  PromptTemplate decision;
  PromptTemplate action;

  /// Templates compiled into the library from templates/*_v1.txt.
  static const PromptTemplates& builtin();

  /// Loads decision_<tag>.txt and action_<tag>.txt from `dir`.
  static PromptTemplates load(const std::string& dir, const std::string& tag);
};

/// Substitutes `{{name}}` placeholders. A line holding only a placeholder
/// whose value is empty is dropped. Throws ConfigError on a missing value
/// or a malformed placeholder.
std::string render_template(std::string_view text, const std::map<std::string, std::string>& values);

std::string render_decision_prompt(const FeatureVector& fv, RiskProfile profile,
                                   const PromptTemplates& templates = PromptTemplates::builtin());

std::string render_action_prompt(const GridState& state, RiskProfile profile,
                                 const PromptTemplates& templates = PromptTemplates::builtin());

/// The model ignored the one-word output rule.
class NonconformingReply : public std::runtime_error {
 public:
  explicit NonconformingReply(std::string raw)
      : std::runtime_error("nonconforming reply: \"" + raw + "\""), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Strips surrounding whitespace, quotes, emphasis markers and trailing
/// punctuation.
std::string normalize_reply(std::string_view reply);

TargetKind parse_decision(std::string_view reply);
Action parse_action(std::string_view reply);

}  // namespace staghunt
