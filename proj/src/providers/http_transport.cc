#include "persuasion/providers/http_transport.h"

#include <httplib.h>

#include "persuasion/common/errors.h"

namespace persuasion::providers {

Json HttpTransport::Post(const ProviderConfig& cfg, const Json& request) {
  const std::string& url = cfg.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("malformed endpoint '" + url + "'");
  }
  auto path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  auto timeout_us = static_cast<long>(cfg.timeout_seconds * 1e6);
  client.set_connection_timeout(timeout_us / 1000000, timeout_us % 1000000);
  client.set_read_timeout(timeout_us / 1000000, timeout_us % 1000000);
  client.set_write_timeout(timeout_us / 1000000, timeout_us % 1000000);
  httplib::Headers headers;
  if (!cfg.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + cfg.api_key);
  }
  auto res = client.Post(path, headers, request.dump(), "application/json");
  if (!res) {
    throw TransportError(origin + ": " + httplib::to_string(res.error()), 1);
  }
  Json body;
  try {
    body = Json::parse(res->body);
  } catch (const Json::parse_error&) {
    throw TransportError(origin + ": non-JSON response (status " +
                             std::to_string(res->status) + ")",
                         1);
  }
  if (body.is_object() && body.contains("error")) {
    const Json& err = body["error"];
    std::string kind = err.is_object() ? err.value("kind", "") : "";
    std::string message = err.is_object() ? err.value("message", err.dump())
                                          : err.dump();
    if (kind == "capability") throw CapabilityError(message);
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError(origin + ": HTTP " + std::to_string(res->status), 1);
  }
  return body;
}

}  // namespace persuasion::providers
