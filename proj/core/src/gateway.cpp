#include "hypgame/gateway.hpp"

#include <nlohmann/json.hpp>

#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

const char* to_string(GatewayFailure failure) noexcept {
  switch (failure) {
    case GatewayFailure::timeout: return "timeout";
    case GatewayFailure::transport: return "transport";
    case GatewayFailure::http_status: return "http_status";
    case GatewayFailure::protocol: return "protocol";
    case GatewayFailure::not_configured: return "not_configured";
    case GatewayFailure::no_script: return "no_script";
  }
  return "unknown";
}

GatewayError::GatewayError(GatewayFailure failure, const std::string& cause)
    : Error(ErrorCode::gateway, std::string("gateway ") + to_string(failure) + ": " + cause),
      failure_(failure),
      retriable_(failure == GatewayFailure::timeout || failure == GatewayFailure::transport) {}

void validate(const GatewayRequest& request) {
  if (trim(request.role_prompt).empty() || trim(request.user_prompt).empty()) {
    throw Error(ErrorCode::invalid_input, "gateway request prompts must be non-empty");
  }
  if (!(request.temperature >= 0.0)) {
    throw Error(ErrorCode::invalid_input, "gateway temperature must be non-negative");
  }
}

void validate(const GatewayResponse& response) {
  if (response.text.empty() && !response.refusal) {
    throw GatewayError(GatewayFailure::protocol, "empty response text without a refusal flag");
  }
}

void MockGateway::on(const std::string& role_prompt, const std::string& user_prompt, Reply reply) {
  on(role_prompt, user_prompt, std::vector<Reply>{std::move(reply)});
}

void MockGateway::on(const std::string& role_prompt, const std::string& user_prompt,
                     std::vector<Reply> script) {
  std::lock_guard lock(mutex_);
  exact_[{fnv1a64(role_prompt), fnv1a64(user_prompt)}] = Script{std::move(script), 0};
}

void MockGateway::when(std::string role_fragment, std::string user_fragment,
                       std::vector<Reply> script) {
  std::lock_guard lock(mutex_);
  rules_.push_back({std::move(role_fragment), std::move(user_fragment), Script{std::move(script), 0}});
}

void MockGateway::otherwise(std::vector<Reply> script) {
  std::lock_guard lock(mutex_);
  fallback_ = Script{std::move(script), 0};
}

GatewayResponse MockGateway::play(Script& script) {
  if (script.replies.empty()) throw GatewayError(GatewayFailure::no_script, "empty script");
  const std::size_t index = std::min(script.next, script.replies.size() - 1);
  if (script.next < script.replies.size()) ++script.next;
  const Reply& reply = script.replies[index];
  if (const auto* err = std::get_if<GatewayError>(&reply)) throw *err;
  return std::get<GatewayResponse>(reply);
}

GatewayResponse MockGateway::complete(const GatewayRequest& request) {
  validate(request);
  std::lock_guard lock(mutex_);
  calls_.push_back(request);
  auto it = exact_.find({fnv1a64(request.role_prompt), fnv1a64(request.user_prompt)});
  if (it != exact_.end()) return play(it->second);
  for (auto& rule : rules_) {
    if (request.role_prompt.find(rule.role_fragment) != std::string::npos &&
        request.user_prompt.find(rule.user_fragment) != std::string::npos) {
      return play(rule.script);
    }
  }
  if (fallback_) return play(*fallback_);
  throw GatewayError(GatewayFailure::no_script, "mock gateway has no response for this request");
}

std::vector<GatewayRequest> MockGateway::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::size_t MockGateway::call_count() const {
  std::lock_guard lock(mutex_);
  return calls_.size();
}

namespace {

GatewayFailure failure_from_string(const std::string& s) {
  if (s == "timeout") return GatewayFailure::timeout;
  if (s == "transport") return GatewayFailure::transport;
  if (s == "http_status") return GatewayFailure::http_status;
  if (s == "protocol") return GatewayFailure::protocol;
  if (s == "not_configured") return GatewayFailure::not_configured;
  throw Error(ErrorCode::invalid_input, "unknown gateway failure kind '" + s + "'");
}

std::vector<MockGateway::Reply> parse_script(const nlohmann::json& list) {
  std::vector<MockGateway::Reply> out;
  for (const auto& item : list) {
    if (item.is_string()) {
      out.emplace_back(GatewayResponse{item.get<std::string>(), false, std::nullopt});
    } else if (item.contains("error")) {
      out.emplace_back(GatewayError(failure_from_string(item.at("error").get<std::string>()),
                                    item.value("message", "scripted failure")));
    } else {
      out.emplace_back(GatewayResponse{item.value("text", ""), item.value("refusal", false),
                                       std::nullopt});
    }
  }
  return out;
}

}  // namespace

std::unique_ptr<MockGateway> MockGateway::from_json(const nlohmann::json& doc) {
  auto gw = std::make_unique<MockGateway>();
  for (const auto& e : doc.value("exact", nlohmann::json::array())) {
    gw->on(e.at("role_prompt").get<std::string>(), e.at("user_prompt").get<std::string>(),
           parse_script(e.at("responses")));
  }
  for (const auto& r : doc.value("rules", nlohmann::json::array())) {
    gw->when(r.value("role_contains", ""), r.value("user_contains", ""),
             parse_script(r.at("responses")));
  }
  if (doc.contains("default")) gw->otherwise(parse_script(doc.at("default")));
  return gw;
}

GatewayResponse complete_with_retry(Gateway& gateway, const GatewayRequest& request, int attempts) {
  for (int i = 1;; ++i) {
    try {
      auto response = gateway.complete(request);
      validate(response);
      return response;
    } catch (const GatewayError& e) {
      if (!e.retriable() || i >= attempts) throw;
    }
  }
}

}  // namespace hypgame
