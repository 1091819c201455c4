#include "staghunt/llm_client.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "staghunt/errors.hpp"

namespace staghunt {

using nlohmann::json;

void validate(const SamplingParams& p) {
  if (!(p.temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (!(p.top_p > 0.0 && p.top_p <= 1.0)) throw ConfigError("top_p must be in (0, 1]");
  if (p.max_tokens <= 0) throw ConfigError("max_tokens must be positive");
}

SamplingParams default_params_for(std::string_view model_name) {
  std::string lower(model_name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::regex eight_b(R"((^|[^0-9x.])8b\b)");
  SamplingParams p;
  if (std::regex_search(lower, eight_b)) p.top_p = 0.95;
  return p;
}

void validate(const ModelSpec& spec) {
  if (spec.name.empty()) throw ConfigError("model name must not be empty");
  static const std::regex url(R"(^(mock://.*|https?://[^/\s:]+(:[0-9]{1,5})?(/\S*)?)$)");
  if (!std::regex_match(spec.endpoint, url)) {
    throw ConfigError("malformed endpoint URL: '" + spec.endpoint + "'");
  }
  validate(spec.params);
}

ModelSpec mock_model_spec() { return {"mock", "mock://", SamplingParams{}, ""}; }

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpChatTransport::HttpChatTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

json HttpChatTransport::request_body(const ModelSpec& spec, const std::string& prompt) {
  return {
      {"model", spec.name},
      {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", spec.params.temperature},
      {"top_p", spec.params.top_p},
      {"max_tokens", spec.params.max_tokens},
  };
}

std::string HttpChatTransport::send(const ModelSpec& spec, const std::string& prompt) {
  httplib::Headers headers;
  if (!spec.api_key_env.empty()) {
    const char* key = std::getenv(spec.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw CredentialError("environment variable " + spec.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto [base, path] = split_url(spec.endpoint);
  httplib::Client cli(base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());

  auto res = cli.Post(path, headers, request_body(spec, prompt).dump(), "application/json");
  if (!res) {
    throw TransportError("request to " + spec.endpoint + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + " from " + spec.endpoint + ": " +
                         res->body.substr(0, 200));
  }
  try {
    const json body = json::parse(res->body);
    return body.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") + e.what());
  }
}

std::string MockTransport::send(const ModelSpec&, const std::string& prompt) {
  return mock_complete(prompt);
}

std::vector<std::chrono::milliseconds> RetryPolicy::schedule() const {
  std::vector<std::chrono::milliseconds> delays;
  auto remaining = ceiling;
  double next = static_cast<double>(base_delay.count());
  for (int i = 1; i < max_attempts; ++i) {
    auto d = std::chrono::milliseconds(static_cast<long long>(next));
    d = std::min(d, remaining);
    delays.push_back(d);
    remaining -= d;
    next *= multiplier;
  }
  return delays;
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

json ResponseCache::request_key(const ModelSpec& spec, const std::string& prompt, int attempt) {
  return {
      {"model", spec.name},
      {"temperature", spec.params.temperature},
      {"top_p", spec.params.top_p},
      {"max_tokens", spec.params.max_tokens},
      {"prompt_sha256", sha256_hex(prompt)},
      {"attempt", attempt},
  };
}

std::string ResponseCache::hash_key(const json& key) { return sha256_hex(key.dump()); }

std::filesystem::path ResponseCache::path_for(const std::string& hash) const {
  return dir_ / (hash + ".json");
}

std::mutex& ResponseCache::lock_for(const std::string& hash) const {
  return stripes_[std::hash<std::string>{}(hash) % stripes_.size()];
}

std::optional<std::string> ResponseCache::get(const json& key) const {
  const std::string hash = hash_key(key);
  std::lock_guard lock(lock_for(hash));
  std::ifstream in(path_for(hash));
  if (!in) return std::nullopt;
  try {
    const json entry = json::parse(in);
    if (entry.at("key") != key) return std::nullopt;
    return entry.at("reply").get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;  // torn or foreign file: treat as a miss
  }
}

void ResponseCache::put(const json& key, const std::string& prompt, const std::string& reply) {
  const std::string hash = hash_key(key);
  const json entry{{"key", key}, {"request", {{"prompt", prompt}}}, {"reply", reply}};
  std::lock_guard lock(lock_for(hash));
  const auto final_path = path_for(hash);
  auto tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << entry.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, final_path);
}

LlmClient::LlmClient(std::shared_ptr<ChatTransport> transport, ClientOptions options)
    : transport_(std::move(transport)),
      options_(std::move(options)),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {
  if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
  if (!options_.sleeper) {
    options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string LlmClient::complete(const ModelSpec& spec, const std::string& prompt, int attempt) {
  std::optional<json> key;
  if (cache_) {
    key = ResponseCache::request_key(spec, prompt, attempt);
    if (auto hit = cache_->get(*key)) {
      ++cache_hits_;
      return *hit;
    }
  }

  const auto delays = options_.retry.schedule();
  std::string last_error;
  for (int i = 0; i < options_.retry.max_attempts; ++i) {
    if (i > 0) options_.sleeper(delays[static_cast<std::size_t>(i - 1)]);
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      ++network_calls_;
      std::string reply = transport_->send(spec, prompt);
      if (cache_) cache_->put(*key, prompt, reply);
      return reply;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError("giving up after " + std::to_string(options_.retry.max_attempts) +
                       " attempts: " + last_error);
}

std::shared_ptr<ChatTransport> make_transport(const ModelSpec& spec) {
  if (spec.endpoint.starts_with("mock:")) return std::make_shared<MockTransport>();
  return std::make_shared<HttpChatTransport>();
}

}  // namespace staghunt
