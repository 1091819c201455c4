#include "staghunt/session.hpp"

#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "staghunt/errors.hpp"
#include "staghunt/rng.hpp"
#include "staghunt/runner.hpp"

namespace staghunt {

using nlohmann::json;

std::optional<Action> key_to_action(std::string_view key) noexcept {
  if (key.size() != 1) return std::nullopt;
  switch (key[0]) {
    case 'W': case 'w': return Action::Up;
    case 'A': case 'a': return Action::Left;
    case 'S': case 's': return Action::Down;
    case 'D': case 'd': return Action::Right;
    case 'X': case 'x': return Action::Stay;
    default: return std::nullopt;
  }
}

json to_json(const StateView& v) {
  return {
      {"session_id", v.session_id},
      {"participant_id", v.participant_id},
      {"scenario_index", v.scenario_index},
      {"scenario_count", v.scenario_count},
      {"step", v.state.step},
      {"blue", to_json(v.state.blue)},
      {"purple", to_json(v.state.purple)},
      {"stag", to_json(v.state.stag)},
      {"hares", json::array({to_json(v.state.hares[0]), to_json(v.state.hares[1])})},
      {"score", v.score ? to_json(*v.score) : json(nullptr)},
      {"terminal", v.terminal},
      {"last_reward", v.last_reward ? to_json(*v.last_reward) : json(nullptr)},
      {"status", v.status == SessionStatus::Active ? "active" : "complete"},
  };
}

struct SessionManager::Session {
  std::mutex mutex;
  std::string id;
  std::string participant_id;
  std::uint64_t seed = 0;
  int scenario_index = 0;
  GridState state;
  ScriptedPolicyState purple;
  Trajectory current;
  std::vector<Trajectory> finished;
  RewardPair score;
  SessionStatus status = SessionStatus::Active;
  std::shared_ptr<const StateView> snapshot;
  std::map<std::uint64_t, Listener> listeners;
  std::uint64_t next_token = 1;
  std::ofstream journal;
};

namespace {

void spawn(const StagHuntEnv& env, int index, std::uint64_t session_seed,
           const std::string& session_id, GridState& state, ScriptedPolicyState& purple, Trajectory& current) {
  const std::uint64_t seed = episode_seed(session_seed, static_cast<std::uint64_t>(index));
  state = env.new_scenario(seed);
  purple = scripted_reset(purple_seed(seed), state);
  current = Trajectory{};
  char id[32];
  std::snprintf(id, sizeof id, "scenario-%d", index + 1);
  current.episode_id = id;
  current.seed = seed;
  current.purple_seed = purple_seed(seed);
  current.blue_policy = describe(HumanBridgePolicy{session_id});
  current.purple_policy = scripted_purple_descriptor();
  current.initial_state = state;
}

}  // namespace

SessionManager::SessionManager(SessionOptions options)
    : options_(std::move(options)), env_(options_.env), id_state_(std::random_device{}()) {
  id_state_ = (id_state_ << 32) ^ std::random_device{}();
  if (options_.journal_dir) {
    std::filesystem::create_directories(*options_.journal_dir);
    restore_journals();
  }
}

SessionManager::~SessionManager() = default;

std::string SessionManager::new_session_id() {
  std::lock_guard lock(id_mutex_);
  for (;;) {
    id_state_ = mix_seed(id_state_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(id_state_));
    std::shared_lock map_lock(map_mutex_);
    if (!sessions_.contains(buf)) return buf;
  }
}

std::shared_ptr<SessionManager::Session> SessionManager::start_session(std::string id, std::string participant_id,
                                                                       std::uint64_t seed) {
  auto s = std::make_shared<Session>();
  s->id = std::move(id);
  s->participant_id = std::move(participant_id);
  s->seed = seed;
  spawn(env_, 0, seed, s->id, s->state, s->purple, s->current);

  StateView v;
  v.session_id = s->id;
  v.participant_id = s->participant_id;
  v.state = s->state;
  if (!options_.hide_score) v.score = RewardPair{};
  std::atomic_store(&s->snapshot, std::make_shared<const StateView>(std::move(v)));
  return s;
}

StateView SessionManager::create_session(std::string participant_id, std::uint64_t seed) {
  std::string id = new_session_id();
  if (participant_id.empty()) participant_id = "anon-" + id.substr(1, 8);
  auto s = start_session(id, participant_id, seed);
  if (options_.journal_dir) {
    s->journal.open(*options_.journal_dir / (id + ".jsonl"), std::ios::app);
    s->journal << json{{"kind", "create"}, {"session_id", id}, {"participant_id", participant_id}, {"seed", seed}}
                      .dump()
               << '\n'
               << std::flush;
  }
  StateView view = *std::atomic_load(&s->snapshot);
  std::unique_lock lock(map_mutex_);
  sessions_.emplace(id, std::move(s));
  return view;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& session_id) const {
  std::shared_lock lock(map_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw SessionError(SessionErrorCode::NotFound, "no session " + session_id);
  return it->second;
}

StateView SessionManager::get_state(const std::string& session_id) const {
  return *std::atomic_load(&find(session_id)->snapshot);
}

StateView SessionManager::submit_key(const std::string& session_id, std::string_view key) {
  auto s = find(session_id);
  const auto action = key_to_action(key);
  if (!action) throw SessionError(SessionErrorCode::UnknownKey, "unknown key '" + std::string(key) + "'");
  std::lock_guard lock(s->mutex);
  return apply_key(*s, *action, true);
}

StateView SessionManager::apply_key(Session& s, Action action, bool journal) {
  if (s.status == SessionStatus::Complete) {
    throw SessionError(SessionErrorCode::Complete, "session " + s.id + " is complete");
  }
  if (journal && s.journal.is_open()) {
    s.journal << json{{"kind", "key"}, {"action", to_string(action)}}.dump() << '\n' << std::flush;
  }

  StepRecord r;
  r.step = s.state.step;
  r.state = s.state;
  r.blue_action = action;
  r.purple_action = scripted_act(s.purple, s.state);
  StepResult next = env_.step(s.state, r.blue_action, r.purple_action);
  s.current.records.push_back(std::move(r));
  s.state = next.state;

  StateView v;
  v.session_id = s.id;
  v.participant_id = s.participant_id;
  if (next.reward) {
    s.current.final_state = s.state;
    s.current.reward = next.reward;
    s.current.outcome = (s.state.blue_capture && s.state.purple_capture) ? EpisodeOutcome::Capture
                                                                         : EpisodeOutcome::Timeout;
    s.finished.push_back(std::move(s.current));
    s.score.blue += next.reward->blue;
    s.score.purple += next.reward->purple;
    v.terminal = true;
    v.last_reward = next.reward;
    if (s.scenario_index + 1 >= kScenariosPerSession) {
      s.status = SessionStatus::Complete;
      s.current = Trajectory{};
    } else {
      ++s.scenario_index;
      spawn(env_, s.scenario_index, s.seed, s.id, s.state, s.purple, s.current);
    }
  }
  v.scenario_index = s.scenario_index;
  v.state = s.state;
  v.status = s.status;
  if (!options_.hide_score) v.score = s.score;

  std::atomic_store(&s.snapshot, std::make_shared<const StateView>(v));
  for (auto& [token, listener] : s.listeners) listener(v);
  return v;
}

TrajectoryDataset SessionManager::export_log(const std::string& session_id) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  TrajectoryDataset d;
  d.manifest.producer = "session";
  d.manifest.seed = s->seed;
  d.manifest.template_version = "";
  d.manifest.model = nullptr;
  d.manifest.env = env_.config();
  d.manifest.extra = {{"session_id", s->id},
                      {"participant_id", s->participant_id},
                      {"status", s->status == SessionStatus::Active ? "active" : "complete"}};
  d.episodes = s->finished;
  if (s->status == SessionStatus::Active) {
    Trajectory partial = s->current;
    partial.final_state = s->state;
    partial.outcome = EpisodeOutcome::Partial;
    d.episodes.push_back(std::move(partial));
  }
  return d;
}

std::uint64_t SessionManager::subscribe(const std::string& session_id, Listener listener) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  const std::uint64_t token = s->next_token++;
  s->listeners.emplace(token, std::move(listener));
  return token;
}

void SessionManager::unsubscribe(const std::string& session_id, std::uint64_t token) {
  std::shared_ptr<Session> s;
  try {
    s = find(session_id);
  } catch (const SessionError&) {
    return;
  }
  std::lock_guard lock(s->mutex);
  s->listeners.erase(token);
}

std::size_t SessionManager::session_count() const {
  std::shared_lock lock(map_mutex_);
  return sessions_.size();
}

void SessionManager::restore_journals() {
  for (const auto& entry : std::filesystem::directory_iterator(*options_.journal_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    std::shared_ptr<Session> s;
    try {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "create") {
          s = start_session(j.at("session_id").get<std::string>(), j.at("participant_id").get<std::string>(),
                            j.at("seed").get<std::uint64_t>());
        } else if (kind == "key" && s) {
          const auto action = action_from_string(j.at("action").get<std::string>());
          if (!action) throw ValidationError("bad action in journal");
          apply_key(*s, *action, false);
        }
      }
    } catch (const std::exception& e) {
      spdlog::error("skipping journal {}: {}", entry.path().string(), e.what());
      continue;
    }
    if (!s) continue;
    s->journal.open(entry.path(), std::ios::app);
    std::unique_lock lock(map_mutex_);
    sessions_.emplace(s->id, std::move(s));
  }
}

}  // namespace staghunt
