#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "staghunt/errors.hpp"
#include "staghunt/runner.hpp"
#include "staghunt/server.hpp"
#include "staghunt/session.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace staghunt;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kTransport = 3,
  kValidation = 4,
};

struct ModelFlags {
  std::string model;
  std::string endpoint;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  std::string api_key_env;
  bool mock = false;
  std::string cache_dir;
  int max_in_flight = 8;
  std::string templates_dir;
  std::string template_tag = "v1";
};

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string env_config;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--model", m.model, "Model name sent to the endpoint");
  cmd->add_option("--endpoint", m.endpoint, "Chat-completions URL");
  cmd->add_option("--temperature", m.temperature, "Sampling temperature (default 0)");
  cmd->add_option("--top-p", m.top_p, "Nucleus sampling mass (default by model size)");
  cmd->add_option("--max-tokens", m.max_tokens, "Completion token limit (default 1024)");
  cmd->add_option("--api-key-env", m.api_key_env, "Environment variable holding the bearer token");
  cmd->add_flag("--mock", m.mock, "Use the built-in deterministic mock model");
  cmd->add_option("--cache-dir", m.cache_dir, "Response cache directory");
  cmd->add_option("--max-in-flight", m.max_in_flight, "Concurrent request limit")->check(CLI::PositiveNumber);
  cmd->add_option("--templates", m.templates_dir, "Directory with decision_<tag>.txt and action_<tag>.txt");
  cmd->add_option("--template-tag", m.template_tag, "Template version tag");
}

void add_common_flags(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--env-config", c.env_config, "Environment config JSON");
}

ModelSpec build_spec(const ModelFlags& m) {
  ModelSpec spec;
  if (m.mock) {
    spec = mock_model_spec();
    if (!m.model.empty()) spec.name = m.model;
  } else {
    if (m.model.empty() || m.endpoint.empty()) throw ConfigError("--model and --endpoint are required without --mock");
    spec.name = m.model;
    spec.endpoint = m.endpoint;
    spec.params = default_params_for(m.model);
  }
  if (m.temperature) spec.params.temperature = *m.temperature;
  if (m.top_p) spec.params.top_p = *m.top_p;
  if (m.max_tokens) spec.params.max_tokens = *m.max_tokens;
  spec.api_key_env = m.api_key_env;
  validate(spec);
  return spec;
}

std::unique_ptr<LlmClient> build_client(const ModelFlags& m, const ModelSpec& spec) {
  ClientOptions options;
  if (!m.cache_dir.empty()) options.cache_dir = m.cache_dir;
  options.max_in_flight = m.max_in_flight;
  return std::make_unique<LlmClient>(make_transport(spec), options);
}

PromptTemplates build_templates(const ModelFlags& m) {
  if (m.templates_dir.empty()) return PromptTemplates::builtin();
  return PromptTemplates::load(m.templates_dir, m.template_tag);
}

EnvConfig build_env(const CommonFlags& c) { return c.env_config.empty() ? EnvConfig{} : load_env_config(c.env_config); }

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::string trials_jsonl(const std::vector<DecisionTrial>& trials, std::optional<RiskProfile> profile) {
  std::ostringstream os;
  for (const DecisionTrial& t : trials) {
    json j = to_json(t);
    if (profile) j["profile"] = to_string(*profile);
    os << j.dump() << '\n';
  }
  return os.str();
}

int cmd_exp1(const ModelFlags& m, const CommonFlags& c, const std::string& scenarios_path) {
  const ModelSpec spec = build_spec(m);
  const PromptTemplates templates = build_templates(m);
  const auto scenarios = load_scenarios(scenarios_path);
  auto client = build_client(m, spec);
  const fs::path out = prepare_out(c.out);

  std::ofstream live(out / "exp1_predictions.jsonl", std::ios::binary | std::ios::trunc);
  const Exp1Result r = run_experiment1(scenarios, *client, spec,
                                       [&](const DecisionTrial& t) { live << to_json(t).dump() << '\n' << std::flush; },
                                       templates);
  live.close();

  const std::string table = format_metrics_table(r.report);
  write_file(out / "exp1_report.txt", table);
  write_file(out / "exp1_report.json", to_json(r.report).dump(2) + "\n");
  std::cout << table;
  return kOk;
}

int cmd_exp2(const ModelFlags& m, const CommonFlags& c, const std::string& scenarios_path,
             const std::vector<std::string>& profile_names, bool count_invalid) {
  std::vector<RiskProfile> profiles;
  for (const std::string& name : profile_names) {
    const auto p = profile_from_string(name);
    if (!p) throw ConfigError("unknown profile '" + name + "'");
    profiles.push_back(*p);
  }
  if (profiles.empty()) profiles = {RiskProfile::RiskAverse, RiskProfile::Neutral, RiskProfile::RiskSeeking};

  const ModelSpec spec = build_spec(m);
  const PromptTemplates templates = build_templates(m);
  const auto scenarios = load_scenarios(scenarios_path);
  auto client = build_client(m, spec);
  const fs::path out = prepare_out(c.out);

  const auto runs = run_experiment2(scenarios, *client, spec, profiles, count_invalid, {}, templates);

  std::string trials;
  json report = json::array();
  for (const ProfileRun& run : runs) {
    trials += trials_jsonl(run.trials, run.profile);
    json j = to_json(run.report);
    j["profile"] = to_string(run.profile);
    report.push_back(std::move(j));
  }
  const std::string summary = format_risk_summary(spec.name, runs);
  write_file(out / "exp2_trials.jsonl", trials);
  write_file(out / "exp2_risk.json", json{{"model", spec.name}, {"profiles", report}}.dump(2) + "\n");
  write_file(out / "exp2_risk.txt", summary);
  std::cout << summary;
  return kOk;
}

int cmd_exp3(const ModelFlags& m, const CommonFlags& c, const std::string& profile_name, const std::string& blue_kind,
             int episodes, bool serial) {
  const StagHuntEnv env(build_env(c));
  const PromptTemplates templates = build_templates(m);

  BatchSpec batch;
  batch.master_seed = c.seed;
  batch.n_episodes = episodes;
  batch.templates = &templates;
  std::unique_ptr<LlmClient> client;
  if (blue_kind == "llm") {
    const auto profile = profile_from_string(profile_name);
    if (!profile) throw ConfigError("unknown profile '" + profile_name + "'");
    const ModelSpec spec = build_spec(m);
    client = build_client(m, spec);
    batch.blue = LlmPolicy{spec, *profile};
    batch.client = client.get();
  } else {
    batch.blue = ScriptedPolicy{};
  }

  const fs::path out = prepare_out(c.out);
  const Exp3Result r = run_experiment3(env, batch, !serial);
  write_file(out / "trajectories.jsonl", to_jsonl(r.dataset));
  const std::string summary = to_json(r.summary).dump(2) + "\n";
  write_file(out / "exp3_summary.json", summary);
  std::cout << summary;
  return r.summary.aborted > 0 ? kTransport : kOk;
}

int cmd_replay(const std::string& path, const std::string& env_config) {
  const TrajectoryDataset d = read_jsonl_file(path);
  const StagHuntEnv env(env_config.empty() ? d.manifest.env : load_env_config(env_config));
  int failures = 0;
  for (const Trajectory& t : d.episodes) {
    if (auto why = replay_mismatch(t, env)) {
      ++failures;
      std::cout << t.episode_id << ": MISMATCH " << *why << '\n';
    } else {
      std::cout << t.episode_id << ": ok (" << t.length() << " steps, " << to_string(t.outcome) << ")\n";
    }
  }
  std::cout << d.episodes.size() - static_cast<std::size_t>(failures) << "/" << d.episodes.size()
            << " episodes replayed identically\n";
  return failures == 0 ? kOk : kValidation;
}

SessionServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const CommonFlags& c, const std::string& host, int port, const std::string& journal, bool hide_score) {
  SessionOptions options;
  options.env = build_env(c);
  options.hide_score = hide_score;
  if (!journal.empty()) options.journal_dir = journal;
  SessionManager sessions(options);
  SessionServer server(sessions);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  spdlog::info("listening on {}:{} ({} restored sessions)", host, port, sessions.session_count());
  const bool ok = server.listen(host, port);
  g_server = nullptr;
  if (!ok) {
    spdlog::error("could not listen on {}:{}", host, port);
    return kConfig;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stag Hunt grid-world simulator and LLM evaluation harness"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  ModelFlags model;
  CommonFlags common;
  std::string scenarios;
  std::vector<std::string> profiles;
  std::string profile = "neutral";
  std::string blue = "llm";
  int episodes = 100;
  bool serial = false;
  bool count_invalid = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string journal;
  bool hide_score = false;
  std::string replay_in;

  auto* exp1 = app.add_subcommand("exp1", "Stag/Hare decisions scored against judge labels");
  add_model_flags(exp1, model);
  add_common_flags(exp1, common);
  exp1->add_option("--scenarios", scenarios, "Scenario JSONL")->required()->check(CLI::ExistingFile);

  auto* exp2 = app.add_subcommand("exp2", "Risk index under each risk profile");
  add_model_flags(exp2, model);
  add_common_flags(exp2, common);
  exp2->add_option("--scenarios", scenarios, "Scenario JSONL")->required()->check(CLI::ExistingFile);
  exp2->add_option("--profile", profiles, "neutral|averse|seeking (repeatable; default all)");
  exp2->add_flag("--count-invalid", count_invalid, "Count invalid replies in the risk index total");

  auto* exp3 = app.add_subcommand("exp3", "Full episodes against the scripted Purple hunter");
  add_model_flags(exp3, model);
  add_common_flags(exp3, common);
  exp3->add_option("--profile", profile, "neutral|averse|seeking");
  exp3->add_option("--blue", blue, "Blue policy")->check(CLI::IsMember({"llm", "scripted"}));
  exp3->add_option("--episodes", episodes, "Number of episodes")->check(CLI::PositiveNumber);
  exp3->add_flag("--serial", serial, "Run episodes on one thread");

  auto* serve = app.add_subcommand("serve", "HTTP session service for human play");
  add_common_flags(serve, common);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--journal", journal, "Journal directory for crash recovery");
  serve->add_flag("--hide-score", hide_score, "Omit the cumulative score from state views");

  auto* replay = app.add_subcommand("replay", "Check that recorded trajectories replay exactly");
  replay->add_option("--in", replay_in, "Trajectory JSONL")->required()->check(CLI::ExistingFile);
  replay->add_option("--env-config", common.env_config, "Override the recorded environment config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("staghunt"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*exp1) return cmd_exp1(model, common, scenarios);
    if (*exp2) return cmd_exp2(model, common, scenarios, profiles, count_invalid);
    if (*exp3) return cmd_exp3(model, common, profile, blue, episodes, serial);
    if (*serve) return cmd_serve(common, host, port, journal, hide_score);
    if (*replay) return cmd_replay(replay_in, common.env_config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kConfig;
  } catch (const CredentialError& e) {
    std::cerr << "credential error: " << e.what() << '\n';
    return kTransport;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << '\n';
    return kTransport;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
