#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace staghunt {

struct SamplingParams {
  double temperature = 0.0;
  double top_p = 0.9;
  int max_tokens = 1024;

  friend bool operator==(const SamplingParams&, const SamplingParams&) = default;
};

/// Throws ConfigError unless temperature >= 0, 0 < top_p <= 1, max_tokens > 0.
void validate(const SamplingParams& params);

/// Defaults used for the evaluated models: temperature 0, 1024 tokens,
/// top-p 0.95 for 8B-parameter models and 0.9 otherwise.
SamplingParams default_params_for(std::string_view model_name);

struct ModelSpec {
  std::string name;
  /// Full URL of an OpenAI-style chat-completions route, or "mock://".
  std::string endpoint;
  SamplingParams params;
  /// Environment variable holding the bearer token; empty means no auth.
  std::string api_key_env;
};

void validate(const ModelSpec& spec);

/// {"mock", "mock://", temperature 0 / top-p 0.9 / 1024 tokens, no key}.
ModelSpec mock_model_spec();

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CredentialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prompt matched neither template the mock understands.
class NonconformingPrompt : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One request/response exchange with a model, no retries or caching.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual std::string send(const ModelSpec& spec, const std::string& prompt) = 0;
};

/// Chat-completions over HTTP(S). Body:
///   {"model", "messages":[{"role":"user","content":prompt}],
///    "temperature", "top_p", "max_tokens"}
/// Reply text is choices[0].message.content.
class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(std::chrono::milliseconds timeout = std::chrono::seconds(60));
  std::string send(const ModelSpec& spec, const std::string& prompt) override;

  static nlohmann::json request_body(const ModelSpec& spec, const std::string& prompt);

 private:
  std::chrono::milliseconds timeout_;
};

/// Rule-based offline stand-in for a model (see mock_complete).
class MockTransport final : public ChatTransport {
 public:
  std::string send(const ModelSpec& spec, const std::string& prompt) override;
};

/// Adapts a callable; used by tests to script replies.
class FunctionTransport final : public ChatTransport {
 public:
  using Fn = std::function<std::string(const ModelSpec&, const std::string&)>;
  explicit FunctionTransport(Fn fn) : fn_(std::move(fn)) {}
  std::string send(const ModelSpec& spec, const std::string& prompt) override { return fn_(spec, prompt); }

 private:
  Fn fn_;
};

/// Deterministic answer to either prompt kind.
///
/// Stag/Hare query: "Stag" iff B-S <= B-H and P-S <= 2; the risk-averse
/// line forces "Hare", the risk-seeking line forces "Stag".
///
/// Move query: picks a target the same way (averse: nearest hare, seeking:
/// stag, neutral: the Stag/Hare rule on the distances implied by the
/// offsets) and answers the first step of a greedy Manhattan path to it:
/// larger-gap axis first, horizontal on ties. Steps that would land on a
/// different target are skipped in favour of the other axis or a sidestep.
///
/// Throws NonconformingPrompt for anything else.
std::string mock_complete(std::string_view prompt);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  /// Upper bound on the summed delays between attempts.
  std::chrono::milliseconds ceiling{std::chrono::seconds(10)};

  /// Delays slept before attempts 2..max_attempts.
  std::vector<std::chrono::milliseconds> schedule() const;
};

/// Content-addressed on-disk reply cache: one JSON file per request,
/// named <sha256 of the request key>.json, holding {"key", "request", "reply"}.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  /// Canonical request key: model name, every sampling parameter, the
  /// SHA-256 of the prompt and the attempt number.
  static nlohmann::json request_key(const ModelSpec& spec, const std::string& prompt, int attempt);
  static std::string hash_key(const nlohmann::json& key);

  std::optional<std::string> get(const nlohmann::json& key) const;
  void put(const nlohmann::json& key, const std::string& prompt, const std::string& reply);

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& hash) const;
  std::mutex& lock_for(const std::string& hash) const;

  std::filesystem::path dir_;
  mutable std::array<std::mutex, 32> stripes_;
};

struct ClientOptions {
  std::optional<std::filesystem::path> cache_dir;
  RetryPolicy retry;
  int max_in_flight = 8;
  std::function<void(std::chrono::milliseconds)> sleeper;  // default: sleep_for
};

/// Thread-safe front end: cache lookup, bounded concurrency, retry with
/// exponential backoff on TransportError.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<ChatTransport> transport, ClientOptions options = {});

  /// Raw reply text. `attempt` > 0 re-asks the model (and is cached under a
  /// separate key) when a previous reply for the same prompt was unusable.
  /// Throws TransportError once retries are exhausted, CredentialError
  /// immediately.
  std::string complete(const ModelSpec& spec, const std::string& prompt, int attempt = 0);

  std::size_t network_calls() const noexcept { return network_calls_.load(); }
  std::size_t cache_hits() const noexcept { return cache_hits_.load(); }

 private:
  std::shared_ptr<ChatTransport> transport_;
  ClientOptions options_;
  std::optional<ResponseCache> cache_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<std::size_t> network_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

/// Mock transport when spec.endpoint starts with "mock:", HTTP otherwise.
std::shared_ptr<ChatTransport> make_transport(const ModelSpec& spec);

}  // namespace staghunt
