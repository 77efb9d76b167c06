#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hypgame/gateway.hpp"
#include "hypgame/serialization.hpp"

namespace hypgame {

HttpGateway::HttpGateway(HttpGatewayOptions options) : options_(std::move(options)) {
  const auto scheme_end = options_.url.find("://");
  if (scheme_end == std::string::npos) {
    throw GatewayError(GatewayFailure::not_configured, "gateway URL lacks a scheme: " + options_.url);
  }
  const auto path_start = options_.url.find('/', scheme_end + 3);
  scheme_host_port_ = options_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : options_.url.substr(path_start);
}

std::unique_ptr<HttpGateway> HttpGateway::from_env() {
  const char* url = std::getenv("HYPGAME_GATEWAY_URL");
  if (!url || !*url) {
    throw GatewayError(GatewayFailure::not_configured, "HYPGAME_GATEWAY_URL is not set");
  }
  HttpGatewayOptions options;
  options.url = url;
  if (const char* key = std::getenv("HYPGAME_GATEWAY_KEY")) options.api_key = key;
  return std::make_unique<HttpGateway>(std::move(options));
}

GatewayResponse HttpGateway::complete(const GatewayRequest& request) {
  validate(request);
  httplib::Client client(scheme_host_port_);
  const auto secs = static_cast<time_t>(options_.timeout.count());
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  const nlohmann::json body = request;
  auto result = client.Post(path_, headers, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write ||
        err == httplib::Error::ConnectionTimeout) {
      throw GatewayError(GatewayFailure::timeout, httplib::to_string(err));
    }
    throw GatewayError(GatewayFailure::transport, httplib::to_string(err));
  }
  if (result->status != 200) {
    GatewayError error(GatewayFailure::http_status,
                       "HTTP " + std::to_string(result->status) + ": " + result->body.substr(0, 200));
    error.set_retriable(result->status == 429 || result->status >= 500);
    throw error;
  }
  try {
    auto response = nlohmann::json::parse(result->body).get<GatewayResponse>();
    validate(response);
    return response;
  } catch (const nlohmann::json::exception& e) {
    throw GatewayError(GatewayFailure::protocol, std::string("malformed response body: ") + e.what());
  }
}

}  // namespace hypgame
