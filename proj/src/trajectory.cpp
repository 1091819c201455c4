#include "staghunt/trajectory.hpp"

#include <fstream>
#include <sstream>

#include "staghunt/errors.hpp"

namespace staghunt {

using nlohmann::json;

json to_json(Cell c) { return {{"x", c.x}, {"y", c.y}}; }

json to_json(const RewardPair& r) { return {{"blue", r.blue}, {"purple", r.purple}}; }

json to_json(const GridState& s) {
  auto latch = [](const std::optional<TargetKind>& t) -> json {
    return t ? json(std::string(to_string(*t))) : json(nullptr);
  };
  return {
      {"blue", to_json(s.blue)},
      {"purple", to_json(s.purple)},
      {"stag", to_json(s.stag)},
      {"hares", json::array({to_json(s.hares[0]), to_json(s.hares[1])})},
      {"step", s.step},
      {"blue_capture", latch(s.blue_capture)},
      {"purple_capture", latch(s.purple_capture)},
  };
}

Cell cell_from_json(const json& j) { return {j.at("x").get<int>(), j.at("y").get<int>()}; }

RewardPair reward_from_json(const json& j) { return {j.at("blue").get<int>(), j.at("purple").get<int>()}; }

namespace {

std::optional<TargetKind> latch_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  auto t = target_from_string(j.get<std::string>());
  if (!t) throw ValidationError("unknown capture kind " + j.dump());
  return t;
}

Action action_from_json(const json& j) {
  auto a = action_from_string(j.get<std::string>());
  if (!a) throw ValidationError("unknown action " + j.dump());
  return *a;
}

json env_to_json(const EnvConfig& e) {
  json excl = json::array();
  for (Cell c : e.spawn_exclusion) excl.push_back(to_json(c));
  return {{"grid_size", e.grid_size},
          {"max_steps", e.max_steps},
          {"conventional_payoff", e.conventional_payoff},
          {"spawn_exclusion", excl}};
}

EnvConfig env_from_json(const json& j) {
  EnvConfig e;
  e.grid_size = j.at("grid_size").get<int>();
  e.max_steps = j.at("max_steps").get<int>();
  e.conventional_payoff = j.at("conventional_payoff").get<bool>();
  e.spawn_exclusion.clear();
  for (const auto& c : j.at("spawn_exclusion")) e.spawn_exclusion.push_back(cell_from_json(c));
  return e;
}

}  // namespace

GridState state_from_json(const json& j) {
  GridState s;
  s.blue = cell_from_json(j.at("blue"));
  s.purple = cell_from_json(j.at("purple"));
  s.stag = cell_from_json(j.at("stag"));
  const auto& hares = j.at("hares");
  if (!hares.is_array() || hares.size() != 2) throw ValidationError("state must have exactly 2 hares");
  s.hares = {cell_from_json(hares[0]), cell_from_json(hares[1])};
  s.step = j.at("step").get<int>();
  s.blue_capture = latch_from_json(j.at("blue_capture"));
  s.purple_capture = latch_from_json(j.at("purple_capture"));
  return s;
}

std::string_view to_string(EpisodeOutcome o) noexcept {
  switch (o) {
    case EpisodeOutcome::Capture: return "capture";
    case EpisodeOutcome::Timeout: return "timeout";
    case EpisodeOutcome::Aborted: return "aborted";
    case EpisodeOutcome::Partial: break;
  }
  return "partial";
}

std::optional<EpisodeOutcome> outcome_from_string(std::string_view s) noexcept {
  for (auto o : {EpisodeOutcome::Capture, EpisodeOutcome::Timeout, EpisodeOutcome::Aborted,
                 EpisodeOutcome::Partial}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

void write_jsonl(std::ostream& out, const TrajectoryDataset& d) {
  const auto& m = d.manifest;
  out << json{{"kind", "manifest"},
              {"format", kTrajectoryFormat},
              {"producer", m.producer},
              {"seed", m.seed},
              {"template_version", m.template_version},
              {"model", m.model},
              {"env", env_to_json(m.env)},
              {"extra", m.extra}}
             .dump()
      << '\n';
  for (const Trajectory& t : d.episodes) {
    out << json{{"kind", "episode"},
                {"episode_id", t.episode_id},
                {"seed", t.seed},
                {"purple_seed", t.purple_seed},
                {"blue_policy", t.blue_policy},
                {"purple_policy", t.purple_policy},
                {"initial_state", to_json(t.initial_state)}}
               .dump()
        << '\n';
    for (const StepRecord& r : t.records) {
      out << json{{"kind", "step"},
                  {"episode_id", t.episode_id},
                  {"step", r.step},
                  {"state", to_json(r.state)},
                  {"blue_action", to_string(r.blue_action)},
                  {"purple_action", to_string(r.purple_action)},
                  {"raw_reply", r.raw_reply ? json(*r.raw_reply) : json(nullptr)},
                  {"fallback", r.fallback}}
                 .dump()
          << '\n';
    }
    out << json{{"kind", "end"},
                {"episode_id", t.episode_id},
                {"outcome", to_string(t.outcome)},
                {"steps", t.length()},
                {"final_state", to_json(t.final_state)},
                {"reward", t.reward ? to_json(*t.reward) : json(nullptr)},
                {"error", t.error ? json(*t.error) : json(nullptr)}}
               .dump()
        << '\n';
  }
}

std::string to_jsonl(const TrajectoryDataset& d) {
  std::ostringstream out;
  write_jsonl(out, d);
  return out.str();
}

TrajectoryDataset read_jsonl(std::istream& in) {
  TrajectoryDataset d;
  std::string line;
  long line_no = 0;
  bool have_manifest = false;
  std::optional<Trajectory> open;

  auto fail = [&](const std::string& what) -> ValidationError {
    return ValidationError("trajectory line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (!have_manifest) {
        if (kind != "manifest") throw fail("first record must be the manifest");
        if (j.at("format").get<std::string>() != kTrajectoryFormat) throw fail("unsupported format");
        d.manifest.producer = j.at("producer").get<std::string>();
        d.manifest.seed = j.at("seed").get<std::uint64_t>();
        d.manifest.template_version = j.at("template_version").get<std::string>();
        d.manifest.model = j.at("model");
        d.manifest.env = env_from_json(j.at("env"));
        d.manifest.extra = j.at("extra");
        have_manifest = true;
      } else if (kind == "episode") {
        if (open) throw fail("episode " + open->episode_id + " was not closed");
        Trajectory t;
        t.episode_id = j.at("episode_id").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.purple_seed = j.at("purple_seed").get<std::uint64_t>();
        t.blue_policy = j.at("blue_policy");
        t.purple_policy = j.at("purple_policy");
        t.initial_state = state_from_json(j.at("initial_state"));
        open = std::move(t);
      } else if (kind == "step") {
        if (!open || j.at("episode_id").get<std::string>() != open->episode_id) {
          throw fail("step outside its episode");
        }
        StepRecord r;
        r.step = j.at("step").get<int>();
        if (r.step != open->length()) throw fail("non-contiguous step " + std::to_string(r.step));
        r.state = state_from_json(j.at("state"));
        r.blue_action = action_from_json(j.at("blue_action"));
        r.purple_action = action_from_json(j.at("purple_action"));
        if (!j.at("raw_reply").is_null()) r.raw_reply = j.at("raw_reply").get<std::string>();
        r.fallback = j.at("fallback").get<bool>();
        open->records.push_back(std::move(r));
      } else if (kind == "end") {
        if (!open || j.at("episode_id").get<std::string>() != open->episode_id) {
          throw fail("end record without a matching episode");
        }
        auto outcome = outcome_from_string(j.at("outcome").get<std::string>());
        if (!outcome) throw fail("unknown outcome");
        open->outcome = *outcome;
        if (j.at("steps").get<int>() != open->length()) throw fail("step count mismatch");
        open->final_state = state_from_json(j.at("final_state"));
        if (!j.at("reward").is_null()) open->reward = reward_from_json(j.at("reward"));
        if (!j.at("error").is_null()) open->error = j.at("error").get<std::string>();
        d.episodes.push_back(std::move(*open));
        open.reset();
      } else {
        throw fail("unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw fail(e.what());
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      if (msg.starts_with("trajectory line")) throw;
      throw fail(msg);
    }
  }
  if (!have_manifest) throw ValidationError("trajectory file has no manifest");
  if (open) throw fail("episode " + open->episode_id + " has no end record");
  return d;
}

TrajectoryDataset read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trajectory file: " + path);
  return read_jsonl(in);
}

std::optional<std::string> replay_mismatch(const Trajectory& t, const StagHuntEnv& env) {
  const std::string id = "episode " + t.episode_id + ": ";
  GridState s = env.new_scenario(t.seed);
  if (s != t.initial_state) return id + "seed does not reproduce the initial state";
  std::optional<RewardPair> reward;
  for (const StepRecord& r : t.records) {
    if (r.state != s) return id + "state diverges at step " + std::to_string(r.step);
    if (env.is_terminal(s)) return id + "record after a terminal state at step " + std::to_string(r.step);
    auto next = env.step(s, r.blue_action, r.purple_action);
    s = next.state;
    reward = next.reward;
  }
  if (s != t.final_state) return id + "final state diverges";
  switch (t.outcome) {
    case EpisodeOutcome::Capture:
    case EpisodeOutcome::Timeout:
      if (!env.is_terminal(s)) return id + "recorded as finished but replay is not terminal";
      if (reward != t.reward) return id + "reward diverges";
      break;
    case EpisodeOutcome::Aborted:
    case EpisodeOutcome::Partial:
      if (t.reward) return id + "unfinished episode carries a reward";
      break;
  }
  return std::nullopt;
}

}  // namespace staghunt
