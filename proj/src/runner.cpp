#include "staghunt/runner.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "staghunt/errors.hpp"

namespace staghunt {

using nlohmann::json;

namespace {

FeatureVector features_from_json(const json& j) {
  return {j.at("bh").get<int>(), j.at("bs").get<int>(), j.at("ph").get<int>(), j.at("ps").get<int>()};
}

json features_to_json(const FeatureVector& f) {
  return {{"bh", f.bh}, {"bs", f.bs}, {"ph", f.ph}, {"ps", f.ps}};
}

json optional_target(const std::optional<TargetKind>& t) {
  return t ? json(std::string(to_string(*t))) : json(nullptr);
}

}  // namespace

std::vector<ScenarioConfig> parse_scenarios(std::istream& in, const std::string& source) {
  std::vector<ScenarioConfig> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    const std::string where = source + " line " + std::to_string(line_no);
    ScenarioConfig sc;
    std::string field;
    try {
      const json j = json::parse(line);
      field = "id";
      sc.id = j.at("id").get<std::string>();
      field = "blue";
      sc.layout.blue = cell_from_json(j.at("blue"));
      field = "purple";
      sc.layout.purple = cell_from_json(j.at("purple"));
      field = "stag";
      sc.layout.stag = cell_from_json(j.at("stag"));
      field = "hares";
      const auto& hares = j.at("hares");
      if (!hares.is_array() || hares.size() != 2) {
        throw ValidationError(where + ": field 'hares' must list exactly 2 cells");
      }
      sc.layout.hares = {cell_from_json(hares[0]), cell_from_json(hares[1])};
      if (j.contains("label") && !j.at("label").is_null()) {
        field = "label";
        sc.judge_label = target_from_string(j.at("label").get<std::string>());
        if (!sc.judge_label) throw ValidationError(where + ": field 'label' must be \"Stag\" or \"Hare\"");
      }
      if (j.contains("features") && !j.at("features").is_null()) {
        field = "features";
        sc.precomputed = features_from_json(j.at("features"));
      }
    } catch (const json::exception& e) {
      throw ValidationError(where + ": field '" + field + "': " + e.what());
    }

    try {
      validate_layout(sc.layout);
    } catch (const ValidationError& e) {
      throw ValidationError(where + " (scenario " + sc.id + "): " + e.what());
    }
    if (sc.precomputed) {
      const FeatureVector derived = feature_vector(sc.layout);
      if (derived != *sc.precomputed) {
        throw ValidationError(where + " (scenario " + sc.id + "): features " +
                              features_to_json(*sc.precomputed).dump() + " disagree with positions, which give " +
                              features_to_json(derived).dump());
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<ScenarioConfig> load_scenarios(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  return parse_scenarios(in, path);
}

json to_json(const ScenarioConfig& s) {
  return {{"id", s.id},
          {"blue", to_json(s.layout.blue)},
          {"purple", to_json(s.layout.purple)},
          {"stag", to_json(s.layout.stag)},
          {"hares", json::array({to_json(s.layout.hares[0]), to_json(s.layout.hares[1])})},
          {"label", optional_target(s.judge_label)},
          {"features", features_to_json(s.features())}};
}

json to_json(const DecisionTrial& t) {
  return {{"scenario_id", t.scenario_id},
          {"features", features_to_json(t.features)},
          {"label", optional_target(t.label)},
          {"prediction", optional_target(t.prediction)},
          {"valid", t.prediction.has_value()},
          {"raw_reply", t.raw_reply},
          {"queries", t.queries}};
}

namespace {

DecisionTrial decide(const ScenarioConfig& sc, LlmClient& client, const ModelSpec& spec, RiskProfile profile,
                     const PromptTemplates& templates) {
  DecisionTrial t;
  t.scenario_id = sc.id;
  t.features = sc.features();
  t.label = sc.judge_label;
  DecideOutcome o = llm_decide(client, spec, profile, t.features, templates);
  t.prediction = o.decision;
  t.raw_reply = std::move(o.raw_reply);
  t.queries = o.queries;
  return t;
}

}  // namespace

Exp1Result run_experiment1(const std::vector<ScenarioConfig>& scenarios, LlmClient& client, const ModelSpec& spec,
                           const TrialSink& sink, const PromptTemplates& templates) {
  if (scenarios.empty()) throw ValidationError("experiment 1 needs at least one scenario");
  for (const auto& sc : scenarios) {
    if (!sc.judge_label) throw ValidationError("scenario " + sc.id + " has no judge label");
  }

  Exp1Result result;
  std::vector<TargetKind> preds;
  std::vector<TargetKind> labels;
  long invalid = 0;
  for (const auto& sc : scenarios) {
    DecisionTrial t = decide(sc, client, spec, RiskProfile::Neutral, templates);
    if (sink) sink(t);
    if (t.prediction) {
      preds.push_back(*t.prediction);
      labels.push_back(*t.label);
    } else {
      ++invalid;
    }
    result.trials.push_back(std::move(t));
  }
  if (preds.empty()) throw ValidationError("experiment 1: every trial was invalid");
  result.report = make_metrics_report(spec.name, preds, labels, invalid);
  return result;
}

std::vector<ProfileRun> run_experiment2(const std::vector<ScenarioConfig>& scenarios, LlmClient& client,
                                        const ModelSpec& spec, const std::vector<RiskProfile>& profiles,
                                        bool count_invalid_in_total, const TrialSink& sink,
                                        const PromptTemplates& templates) {
  if (scenarios.empty()) throw ValidationError("experiment 2 needs at least one scenario");
  std::vector<ProfileRun> runs;
  for (RiskProfile profile : profiles) {
    ProfileRun run;
    run.profile = profile;
    std::vector<std::optional<TargetKind>> decisions;
    for (const auto& sc : scenarios) {
      DecisionTrial t = decide(sc, client, spec, profile, templates);
      if (sink) sink(t);
      decisions.push_back(t.prediction);
      run.trials.push_back(std::move(t));
    }
    run.report = risk_index(decisions, count_invalid_in_total);
    runs.push_back(std::move(run));
  }
  return runs;
}

std::string format_risk_summary(const std::string& model, const std::vector<ProfileRun>& runs) {
  std::ostringstream out;
  out << "Model: " << model << "\n";
  out << "Bands: risk-seeking [-1, -0.2], neutral (-0.2, 0.2), risk-averse [0.2, 1]\n";
  out << "Profile     N_Hare  N_Stag  N_Total      phi  Class\n";
  for (const auto& r : runs) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s %7ld %7ld %8ld %8.3f  %s\n", std::string(to_string(r.profile)).c_str(),
                  r.report.n_hare, r.report.n_stag, r.report.n_total, r.report.phi,
                  std::string(to_string(r.report.classification)).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace staghunt
