#include "staghunt/server.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>

#include "httplib.h"
#include "staghunt/rng.hpp"

namespace staghunt {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", code}, {"message", message}}.dump(), kJson);
}

void send_session_error(httplib::Response& res, const SessionError& e) {
  switch (e.code()) {
    case SessionErrorCode::NotFound: send_error(res, 404, "not_found", e.what()); break;
    case SessionErrorCode::UnknownKey: send_error(res, 400, "unknown_key", e.what()); break;
    case SessionErrorCode::Complete: send_error(res, 409, "session_complete", e.what()); break;
  }
}

// Per-connection queue between the session's listener and the SSE writer.
struct EventQueue {
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<std::string> events;
  bool closed = false;

  void push(const StateView& v) {
    {
      std::lock_guard lock(mutex);
      events.push_back("data: " + to_json(v).dump() + "\n\n");
      if (v.status == SessionStatus::Complete) closed = true;
    }
    cv.notify_all();
  }
};

}  // namespace

SessionServer::SessionServer(SessionManager& sessions)
    : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

SessionServer::~SessionServer() { stop(); }

void SessionServer::install_routes() {
  auto& srv = *server_;

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    std::string participant;
    std::uint64_t seed =
        mix_seed(static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    try {
      if (!req.body.empty()) {
        const json body = json::parse(req.body);
        participant = body.value("participant_id", std::string{});
        if (body.contains("seed")) seed = body.at("seed").get<std::uint64_t>();
      }
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
      return;
    }
    const StateView v = sessions_.create_session(participant, seed);
    spdlog::debug("session {} created for '{}' (seed {})", v.session_id, v.participant_id, seed);
    res.status = 201;
    res.set_content(to_json(v).dump(), kJson);
  });

  srv.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(to_json(sessions_.get_state(req.matches[1])).dump(), kJson);
    } catch (const SessionError& e) {
      send_session_error(res, e);
    }
  });

  srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/key)", [this](const httplib::Request& req, httplib::Response& res) {
    std::string key;
    try {
      key = json::parse(req.body).at("key").get<std::string>();
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
      return;
    }
    try {
      res.set_content(to_json(sessions_.submit_key(req.matches[1], key)).dump(), kJson);
    } catch (const SessionError& e) {
      send_session_error(res, e);
    }
  });

  srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      res.set_content(to_jsonl(sessions_.export_log(req.matches[1])), "application/x-ndjson");
    } catch (const SessionError& e) {
      send_session_error(res, e);
    }
  });

  srv.Get(R"(/sessions/([A-Za-z0-9_-]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto queue = std::make_shared<EventQueue>();
    std::uint64_t token = 0;
    try {
      // Subscribe first so no transition falls between snapshot and stream.
      token = sessions_.subscribe(id, [queue](const StateView& v) { queue->push(v); });
      queue->push(sessions_.get_state(id));
    } catch (const SessionError& e) {
      send_session_error(res, e);
      return;
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, queue](std::size_t, httplib::DataSink& sink) {
          std::deque<std::string> pending;
          bool closed = false;
          {
            std::unique_lock lock(queue->mutex);
            queue->cv.wait_for(lock, std::chrono::milliseconds(250),
                               [&] { return !queue->events.empty() || stopping_.load(); });
            pending.swap(queue->events);
            closed = queue->closed;
          }
          if (stopping_.load()) return false;
          for (const std::string& ev : pending) {
            if (!sink.write(ev.data(), ev.size())) return false;
          }
          if (closed) {
            sink.done();
            return true;
          }
          return sink.is_writable();
        },
        [this, id, token](bool) { sessions_.unsubscribe(id, token); });
  });
}

bool SessionServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int SessionServer::bind_to_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool SessionServer::listen_after_bind() { return server_->listen_after_bind(); }

void SessionServer::wait_until_ready() const { server_->wait_until_ready(); }

void SessionServer::stop() {
  stopping_ = true;
  if (server_) server_->stop();
}

}  // namespace staghunt
