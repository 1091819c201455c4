#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "staghunt/agents.hpp"
#include "staghunt/environment.hpp"
#include "staghunt/trajectory.hpp"

namespace staghunt {

inline constexpr int kScenariosPerSession = 9;

/// W -> UP, A -> LEFT, S -> DOWN, D -> RIGHT, X -> STAY (either case).
std::optional<Action> key_to_action(std::string_view key) noexcept;

enum class SessionStatus { Active, Complete };

/// Read-only snapshot handed to clients after every transition.
struct StateView {
  std::string session_id;
  std::string participant_id;
  int scenario_index = 0;  // 0-based
  int scenario_count = kScenariosPerSession;
  GridState state;
  std::optional<RewardPair> score;  // cumulative; nullopt when hidden
  /// The transition that produced this view ended an episode.
  bool terminal = false;
  std::optional<RewardPair> last_reward;
  SessionStatus status = SessionStatus::Active;
};

/// JSON schema:
///   {"session_id": str, "participant_id": str,
///    "scenario_index": 0..8, "scenario_count": 9, "step": 0..max_steps,
///    "blue", "purple", "stag": {"x":0..4,"y":0..4}, "hares": [{x,y},{x,y}],
///    "score": {"blue": int, "purple": int} | null,
///    "terminal": bool, "last_reward": {"blue","purple"} | null,
///    "status": "active" | "complete"}
nlohmann::json to_json(const StateView& v);

enum class SessionErrorCode { NotFound, UnknownKey, Complete };

class SessionError : public std::runtime_error {
 public:
  SessionError(SessionErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  SessionErrorCode code() const noexcept { return code_; }

 private:
  SessionErrorCode code_;
};

struct SessionOptions {
  EnvConfig env;
  bool hide_score = false;
  /// When set, every session is journaled here (one file per session) and
  /// restored on construction.
  std::optional<std::filesystem::path> journal_dir;
};

/// Live human-vs-scripted sessions of nine scenarios each.
///
/// Each key press is one transition: Blue applies the key, Purple's
/// scripted move follows immediately, and a finished episode spawns the
/// next scenario. Scenario k of a session seeded S uses the same episode
/// seed as episode k of a batch run with master seed S.
///
/// Transitions of one session are serialized; snapshots are published
/// atomically so reads never wait on a writer.
class SessionManager {
 public:
  explicit SessionManager(SessionOptions options = {});
  ~SessionManager();

  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  StateView create_session(std::string participant_id, std::uint64_t seed);
  StateView submit_key(const std::string& session_id, std::string_view key);
  StateView get_state(const std::string& session_id) const;

  /// Finished episodes plus, for an active session, the current episode
  /// marked Partial.
  TrajectoryDataset export_log(const std::string& session_id) const;

  using Listener = std::function<void(const StateView&)>;
  /// Listener runs after every transition of the session, in order.
  std::uint64_t subscribe(const std::string& session_id, Listener listener);
  void unsubscribe(const std::string& session_id, std::uint64_t token);

  std::size_t session_count() const;

  const SessionOptions& options() const noexcept { return options_; }

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id) const;
  std::string new_session_id();
  void restore_journals();
  std::shared_ptr<Session> start_session(std::string id, std::string participant_id, std::uint64_t seed);
  StateView apply_key(Session& s, Action action, bool journal);

  SessionOptions options_;
  StagHuntEnv env_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex id_mutex_;
  std::uint64_t id_state_;
};

}  // namespace staghunt
