#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "staghunt/session.hpp"

namespace httplib {
class Server;
}

namespace staghunt {

/// HTTP JSON front end for SessionManager.
///
///   POST /sessions               {"participant_id"?: str, "seed"?: uint}  -> 201 StateView
///   GET  /sessions/{id}                                                  -> 200 StateView
///   POST /sessions/{id}/key      {"key": "W"|"A"|"S"|"D"|"X"}            -> 200 StateView
///   GET  /sessions/{id}/log                                              -> 200 trajectory JSONL
///   GET  /sessions/{id}/stream   text/event-stream; one "data: <StateView>" event now
///                                and after every transition, closed once the session completes
///
/// Errors are {"error": code, "message": str} with 404 (not_found),
/// 400 (unknown_key, bad_request) or 409 (session_complete).
class SessionServer {
 public:
  explicit SessionServer(SessionManager& sessions);
  ~SessionServer();

  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; call listen_after_bind() next.
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  void install_routes();

  SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
};

}  // namespace staghunt
