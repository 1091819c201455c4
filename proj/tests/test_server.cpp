#include <gtest/gtest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "session_driver.hpp"
#include "staghunt/server.hpp"

using namespace staghunt;
using nlohmann::json;

namespace {

class LiveServer {
 public:
  explicit LiveServer(SessionOptions options = {}) : sessions_(std::move(options)), server_(sessions_) {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(5, 0);
    return c;
  }
  SessionManager& sessions() { return sessions_; }

 private:
  SessionManager sessions_;
  SessionServer server_;
  int port_ = 0;
  std::thread thread_;
};

json post(httplib::Client& c, const std::string& path, const json& body, int expect) {
  auto res = c.Post(path, body.dump(), "application/json");
  EXPECT_TRUE(res);
  if (!res) return {};
  EXPECT_EQ(res->status, expect) << res->body;
  return json::parse(res->body);
}

GridState view_state(const json& v) {
  GridState s;
  s.blue = cell_from_json(v.at("blue"));
  s.purple = cell_from_json(v.at("purple"));
  s.stag = cell_from_json(v.at("stag"));
  s.hares = {cell_from_json(v.at("hares").at(0)), cell_from_json(v.at("hares").at(1))};
  return s;
}

}  // namespace

TEST(Server, CreateGetAndKey) {
  LiveServer srv;
  auto c = srv.client();
  const json created = post(c, "/sessions", {{"participant_id", "alice"}, {"seed", 5}}, 201);
  const std::string id = created.at("session_id");
  EXPECT_EQ(created.at("participant_id"), "alice");
  EXPECT_EQ(created.at("scenario_count"), 9);
  EXPECT_EQ(created.at("status"), "active");

  auto got = c.Get("/sessions/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(json::parse(got->body), created);

  const json moved = post(c, "/sessions/" + id + "/key", {{"key", "x"}}, 200);
  EXPECT_EQ(moved.at("step"), 1);
}

TEST(Server, ErrorCodes) {
  LiveServer srv;
  auto c = srv.client();
  EXPECT_EQ(post(c, "/sessions/s0000/key", {{"key", "W"}}, 404).at("error"), "not_found");
  const std::string id = post(c, "/sessions", json::object(), 201).at("session_id");
  EXPECT_EQ(post(c, "/sessions/" + id + "/key", {{"key", "Q"}}, 400).at("error"), "unknown_key");
  EXPECT_EQ(post(c, "/sessions/" + id + "/key", {{"nokey", 1}}, 400).at("error"), "bad_request");
  auto bad = c.Post("/sessions", "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto missing = c.Get("/sessions/nope/log");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
}

TEST(Server, CompleteSessionRejectsKeys) {
  LiveServer srv;
  auto c = srv.client();
  const std::string id = post(c, "/sessions", {{"seed", 9}}, 201).at("session_id");
  auto first = c.Get("/sessions/" + id);
  ASSERT_TRUE(first);
  json v = json::parse(first->body);
  while (v.at("status") == "active") {
    v = post(c, "/sessions/" + id + "/key", {{"key", driver::next_key(view_state(v))}}, 200);
  }
  EXPECT_EQ(post(c, "/sessions/" + id + "/key", {{"key", "X"}}, 409).at("error"), "session_complete");

  auto log = c.Get("/sessions/" + id + "/log");
  ASSERT_TRUE(log);
  EXPECT_EQ(log->get_header_value("Content-Type"), "application/x-ndjson");
  std::istringstream in(log->body);
  EXPECT_EQ(read_jsonl(in).episodes.size(), 9u);
}

TEST(Server, StreamPushesEveryTransition) {
  LiveServer srv;
  auto c = srv.client();
  const std::string id = post(c, "/sessions", {{"seed", 21}}, 201).at("session_id");

  std::vector<json> events;
  std::atomic<std::size_t> received{0};
  std::thread reader([&] {
    auto sc = srv.client();
    std::string buffer;
    sc.Get("/sessions/" + id + "/stream", [&](const char* data, size_t n) {
      buffer.append(data, n);
      for (auto pos = buffer.find("\n\n"); pos != std::string::npos; pos = buffer.find("\n\n")) {
        const std::string ev = buffer.substr(0, pos);
        buffer.erase(0, pos + 2);
        if (ev.rfind("data: ", 0) == 0) {
          events.push_back(json::parse(ev.substr(6)));
          ++received;
        }
      }
      return events.size() < 4;
    });
  });
  // Wait for the subscription before pressing keys.
  for (int i = 0; i < 200 && received == 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  for (int i = 0; i < 3; ++i) post(c, "/sessions/" + id + "/key", {{"key", "X"}}, 200);
  reader.join();
  ASSERT_EQ(events.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(events[i].at("step"), i);
}
