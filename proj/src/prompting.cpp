#include "staghunt/prompting.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "staghunt/errors.hpp"

namespace staghunt {

namespace detail {
extern const std::string_view kDecisionTemplateV1;
extern const std::string_view kActionTemplateV1;
}  // namespace detail

std::string_view risk_line(RiskProfile profile) noexcept {
  switch (profile) {
    case RiskProfile::RiskAverse: return "You are risk averse.";
    case RiskProfile::RiskSeeking: return "You are risk seeking.";
    case RiskProfile::Neutral: break;
  }
  return "";
}

std::string_view to_string(RiskProfile profile) noexcept {
  switch (profile) {
    case RiskProfile::RiskAverse: return "averse";
    case RiskProfile::RiskSeeking: return "seeking";
    case RiskProfile::Neutral: break;
  }
  return "neutral";
}

std::optional<RiskProfile> profile_from_string(std::string_view s) noexcept {
  if (s == "neutral") return RiskProfile::Neutral;
  if (s == "averse") return RiskProfile::RiskAverse;
  if (s == "seeking") return RiskProfile::RiskSeeking;
  return std::nullopt;
}

namespace {

std::string strip_final_newline(std::string_view text) {
  if (text.ends_with('\n')) text.remove_suffix(1);
  return std::string(text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open template: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool valid_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_';
  });
}

// Substitutes placeholders within one line (no newline inside).
std::string render_line(std::string_view line, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto open = line.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(line.substr(pos));
      break;
    }
    const auto close = line.find("}}", open + 2);
    if (close == std::string_view::npos) throw ConfigError("unterminated placeholder in template");
    const std::string name(line.substr(open + 2, close - open - 2));
    if (!valid_name(name)) throw ConfigError("malformed placeholder {{" + name + "}}");
    const auto it = values.find(name);
    if (it == values.end()) throw ConfigError("no value for placeholder {{" + name + "}}");
    out.append(line.substr(pos, open - pos));
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates templates{
      "v1",
      {strip_final_newline(detail::kDecisionTemplateV1)},
      {strip_final_newline(detail::kActionTemplateV1)},
  };
  return templates;
}

PromptTemplates PromptTemplates::load(const std::string& dir, const std::string& tag) {
  return {
      tag,
      {strip_final_newline(read_file(dir + "/decision_" + tag + ".txt"))},
      {strip_final_newline(read_file(dir + "/action_" + tag + ".txt"))},
  };
}

std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    const std::string rendered = render_line(line, values);
    const bool lone_placeholder = line.starts_with("{{") && line.ends_with("}}") &&
                                  line.find("{{", 2) == std::string_view::npos;
    if (!(lone_placeholder && rendered.empty())) {
      if (!first) out.push_back('\n');
      out.append(rendered);
      first = false;
    }
    pos = eol + 1;
  }
  return out;
}

std::string render_decision_prompt(const FeatureVector& fv, RiskProfile profile,
                                   const PromptTemplates& templates) {
  return render_template(templates.decision.text, {
                                                      {"risk_line", std::string(risk_line(profile))},
                                                      {"bh", std::to_string(fv.bh)},
                                                      {"bs", std::to_string(fv.bs)},
                                                      {"ph", std::to_string(fv.ph)},
                                                      {"ps", std::to_string(fv.ps)},
                                                  });
}

std::string render_action_prompt(const GridState& s, RiskProfile profile,
                                 const PromptTemplates& templates) {
  const Cell blue_hare = nearest_hare(s.blue, s.hares).cell;
  const Cell purple_hare = nearest_hare(s.purple, s.hares).cell;
  return render_template(templates.action.text,
                         {
                             {"risk_line", std::string(risk_line(profile))},
                             {"blue_hare", offset_phrase(s.blue, blue_hare)},
                             {"blue_stag", offset_phrase(s.blue, s.stag)},
                             {"purple_hare", offset_phrase(s.purple, purple_hare)},
                             {"purple_stag", offset_phrase(s.purple, s.stag)},
                         });
}

std::string normalize_reply(std::string_view reply) {
  static constexpr std::array<std::string_view, 4> kCurly{"“", "”", "‘", "’"};
  static constexpr std::string_view kStrip = " \t\r\n\"'`*_.,!?;:()[]";
  bool changed = true;
  while (changed && !reply.empty()) {
    changed = false;
    if (kStrip.find(reply.front()) != std::string_view::npos) {
      reply.remove_prefix(1);
      changed = true;
    } else if (!reply.empty() && kStrip.find(reply.back()) != std::string_view::npos) {
      reply.remove_suffix(1);
      changed = true;
    }
    for (std::string_view q : kCurly) {
      if (reply.starts_with(q)) {
        reply.remove_prefix(q.size());
        changed = true;
      }
      if (reply.ends_with(q)) {
        reply.remove_suffix(q.size());
        changed = true;
      }
    }
  }
  std::string out(reply);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

TargetKind parse_decision(std::string_view reply) {
  const std::string token = normalize_reply(reply);
  if (token == "stag") return TargetKind::Stag;
  if (token == "hare") return TargetKind::Hare;
  throw NonconformingReply(std::string(reply));
}

Action parse_action(std::string_view reply) {
  const std::string token = normalize_reply(reply);
  for (Action a : kAllActions) {
    std::string name(to_string(a));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (token == name) return a;
  }
  throw NonconformingReply(std::string(reply));
}

}  // namespace staghunt
