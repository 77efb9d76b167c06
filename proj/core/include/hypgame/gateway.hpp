#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hypgame/error.hpp"

namespace hypgame {

struct GatewayRequest {
  std::string role_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  std::optional<std::int64_t> seed_hint;

  bool operator==(const GatewayRequest&) const = default;
};
void validate(const GatewayRequest& request);

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool operator==(const TokenUsage&) const = default;
};

struct GatewayResponse {
  std::string text;
  bool refusal = false;
  std::optional<TokenUsage> usage;

  bool operator==(const GatewayResponse&) const = default;
};
void validate(const GatewayResponse& response);

enum class GatewayFailure { timeout, transport, http_status, protocol, not_configured, no_script };

class GatewayError : public Error {
 public:
  GatewayError(GatewayFailure failure, const std::string& cause);

  GatewayFailure failure() const noexcept { return failure_; }
  // Timeouts, transport errors and 5xx/429 statuses are worth retrying.
  bool retriable() const noexcept { return retriable_; }
  void set_retriable(bool value) noexcept { retriable_ = value; }

 private:
  GatewayFailure failure_;
  bool retriable_;
};

const char* to_string(GatewayFailure failure) noexcept;

// Model endpoint shared by every agent. Implementations must accept
// concurrent complete() calls.
class Gateway {
 public:
  virtual ~Gateway() = default;
  virtual GatewayResponse complete(const GatewayRequest& request) = 0;
};

// Canned responses keyed by (role prompt hash, user prompt hash), with
// substring rules as a fallback. Each key holds a script consumed in order;
// the last entry repeats.
class MockGateway final : public Gateway {
 public:
  using Reply = std::variant<GatewayResponse, GatewayError>;

  void on(const std::string& role_prompt, const std::string& user_prompt, Reply reply);
  void on(const std::string& role_prompt, const std::string& user_prompt,
          std::vector<Reply> script);
  // Matches when the role prompt contains `role_fragment` and the user prompt
  // contains `user_fragment`. Rules are tried in insertion order.
  void when(std::string role_fragment, std::string user_fragment, std::vector<Reply> script);
  void otherwise(std::vector<Reply> script);

  GatewayResponse complete(const GatewayRequest& request) override;

  std::vector<GatewayRequest> calls() const;
  std::size_t call_count() const;

  // {"exact": [{role_prompt, user_prompt, responses}], "rules": [{role_contains,
  // user_contains, responses}], "default": [responses]}. A response is a string,
  // {"text", "refusal"} or {"error": "timeout"|...}.
  static std::unique_ptr<MockGateway> from_json(const nlohmann::json& doc);

 private:
  struct Script {
    std::vector<Reply> replies;
    std::size_t next = 0;
  };
  struct Rule {
    std::string role_fragment;
    std::string user_fragment;
    Script script;
  };

  static GatewayResponse play(Script& script);

  mutable std::mutex mutex_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Script> exact_;
  std::vector<Rule> rules_;
  std::optional<Script> fallback_;
  std::vector<GatewayRequest> calls_;
};

struct HttpGatewayOptions {
  std::string url;  // http(s)://host[:port]/path
  std::string api_key;
  std::chrono::seconds timeout{120};
};

// POSTs the request as JSON and reads {"text": ...} back.
class HttpGateway final : public Gateway {
 public:
  explicit HttpGateway(HttpGatewayOptions options);

  // HYPGAME_GATEWAY_URL / HYPGAME_GATEWAY_KEY. Throws GatewayError(not_configured).
  static std::unique_ptr<HttpGateway> from_env();

  GatewayResponse complete(const GatewayRequest& request) override;

 private:
  HttpGatewayOptions options_;
  std::string scheme_host_port_;
  std::string path_;
};

// Retries retriable failures up to `attempts` times in total.
GatewayResponse complete_with_retry(Gateway& gateway, const GatewayRequest& request,
                                    int attempts = 3);

}  // namespace hypgame
