#include "persuasion/providers/provider.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "persuasion/common/errors.h"
#include "persuasion/common/hashing.h"
#include "persuasion/providers/http_transport.h"
#include "persuasion/providers/mock.h"

namespace persuasion::providers {
namespace {

constexpr Role kAllRoles[] = {Role::kEmbedder,  Role::kCaptioner,
                              Role::kJudge,     Role::kGenerator,
                              Role::kClassifier, Role::kScorer};

std::string UpperRole(Role role) {
  std::string name = ToString(role);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return name;
}

}  // namespace

std::string ToString(Role role) {
  switch (role) {
    case Role::kEmbedder:
      return "embedder";
    case Role::kCaptioner:
      return "captioner";
    case Role::kJudge:
      return "judge";
    case Role::kGenerator:
      return "generator";
    case Role::kClassifier:
      return "classifier";
    case Role::kScorer:
      return "scorer";
  }
  return "unknown";
}

Role ParseRole(const std::string& name) {
  for (Role r : kAllRoles) {
    if (ToString(r) == name) return r;
  }
  throw ConfigError("unknown provider role '" + name + "'");
}

ProviderConfig WithEnvironmentOverrides(ProviderConfig cfg) {
  const std::string prefix = "PROVIDER_" + UpperRole(cfg.role);
  if (const char* url = std::getenv((prefix + "_URL").c_str()); url && *url) {
    cfg.endpoint = url;
  }
  if (const char* key = std::getenv((prefix + "_KEY").c_str()); key && *key) {
    cfg.api_key = key;
  }
  return cfg;
}

std::string CacheKey(Role role, const std::string& task, const Json& payload) {
  return Sha256Hex(ToString(role) + "\n" + task + "\n" + payload.dump());
}

ProviderClient::ProviderClient(ProviderConfig cfg,
                               std::shared_ptr<Transport> transport)
    : cfg_(std::move(cfg)),
      transport_(std::move(transport)),
      in_flight_(std::clamp(cfg_.max_in_flight, 1, 1024)) {
  if (cfg_.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (!transport_) throw ConfigError("provider has no transport");
}

std::optional<Json> ProviderClient::CacheLookup(const std::string& key) const {
  if (!cfg_.cache_dir) return std::nullopt;
  auto path = *cfg_.cache_dir / key.substr(0, 2) / (key + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return Json::parse(in);
  } catch (const Json::parse_error&) {
    return std::nullopt;
  }
}

void ProviderClient::CacheStore(const std::string& key,
                                const Json& response) const {
  if (!cfg_.cache_dir) return;
  auto path = *cfg_.cache_dir / key.substr(0, 2) / (key + ".json");
  // Entries are immutable; a concurrent writer of the same key writes the
  // same bytes, so whichever rename lands last is equivalent.
  if (std::filesystem::exists(path)) return;
  AtomicWriteFile(path, response.dump());
}

Json ProviderClient::Call(Role expected, const std::string& task,
                          const Json& payload) {
  if (expected != cfg_.role) {
    throw ContractError("operation requires a " + ToString(expected) +
                        " provider, got " + ToString(cfg_.role));
  }
  ++calls_;
  const std::string key = CacheKey(cfg_.role, task, payload);
  if (auto hit = CacheLookup(key)) {
    ++cache_hits_;
    return *hit;
  }
  const Json request{{"role", ToString(cfg_.role)}, {"task", task},
                     {"payload", payload}};
  const int attempts = 1 + cfg_.max_retries;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    ++attempts_;
    in_flight_.acquire();
    try {
      Json response = transport_->Post(cfg_, request);
      in_flight_.release();
      if (!response.is_object() || !response.contains("payload")) {
        throw ContractError("provider response lacks 'payload'");
      }
      Json result = response.at("payload");
      CacheStore(key, result);
      return result;
    } catch (const TransportError& e) {
      in_flight_.release();
      last_error = e.what();
    } catch (...) {
      in_flight_.release();
      throw;
    }
  }
  throw TransportError(ToString(cfg_.role) + " request failed after " +
                           std::to_string(attempts) +
                           " attempt(s): " + last_error,
                       attempts);
}

ClientStats ProviderClient::stats() const {
  return {calls_.load(), cache_hits_.load(), attempts_.load()};
}

std::optional<std::size_t> ProviderClient::embedding_dim() const {
  std::size_t d = dim_.load();
  if (d == 0) return std::nullopt;
  return d;
}

void ProviderClient::PinEmbeddingDim(std::size_t dim) {
  std::size_t expected = 0;
  if (dim_.compare_exchange_strong(expected, dim)) return;
  if (expected != dim) {
    throw ContractError("embedding dimension " + std::to_string(dim) +
                        " differs from earlier vectors of dimension " +
                        std::to_string(expected));
  }
}

ProviderHandle MakeProviderWithTransport(ProviderConfig cfg,
                                         std::shared_ptr<Transport> transport) {
  return std::make_shared<ProviderClient>(std::move(cfg), std::move(transport));
}

ProviderHandle MakeProvider(ProviderConfig cfg) {
  cfg = WithEnvironmentOverrides(std::move(cfg));
  std::shared_ptr<Transport> transport;
  if (cfg.endpoint.rfind("mock://", 0) == 0) {
    transport = MakeNamedMock(cfg.role, cfg.endpoint.substr(7));
  } else if (cfg.endpoint.rfind("http://", 0) == 0 ||
             cfg.endpoint.rfind("https://", 0) == 0) {
    transport = std::make_shared<HttpTransport>();
  } else {
    throw ConfigError("unsupported provider endpoint '" + cfg.endpoint + "'");
  }
  return MakeProviderWithTransport(std::move(cfg), std::move(transport));
}

}  // namespace persuasion::providers
