#ifndef PERSUASION_PROVIDERS_PROVIDER_H_
#define PERSUASION_PROVIDERS_PROVIDER_H_

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "persuasion/common/jsonl.h"

namespace persuasion::providers {

enum class Role { kEmbedder, kCaptioner, kJudge, kGenerator, kClassifier, kScorer };

std::string ToString(Role role);
Role ParseRole(const std::string& name);

struct ProviderConfig {
  // http(s)://host[:port]/path, or mock://<name> for the built-in mocks.
  std::string endpoint;
  Role role = Role::kEmbedder;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  std::optional<std::filesystem::path> cache_dir;
  std::string api_key;
  int max_in_flight = 8;
};

// Applies PROVIDER_<ROLE>_URL and PROVIDER_<ROLE>_KEY from the environment.
ProviderConfig WithEnvironmentOverrides(ProviderConfig cfg);

// One attempt at one request. Implementations throw TransportError for
// anything retryable and CapabilityError for unsupported features.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Json Post(const ProviderConfig& cfg, const Json& request) = 0;
};

struct ClientStats {
  std::int64_t calls = 0;
  std::int64_t cache_hits = 0;
  std::int64_t transport_attempts = 0;
};

// Uniform client for every model service. Requests are
// {"role", "task", "payload"}; responses are {"payload"}. Handles role
// checks, the on-disk content-hash cache, retries and the in-flight limit.
// Thread-safe.
class ProviderClient {
 public:
  ProviderClient(ProviderConfig cfg, std::shared_ptr<Transport> transport);

  const ProviderConfig& config() const { return cfg_; }

  // Fails with ContractError before any I/O when `expected` differs from
  // the configured role.
  Json Call(Role expected, const std::string& task, const Json& payload);

  ClientStats stats() const;

  // Embedding dimension pinned by the first vector this client returned.
  std::optional<std::size_t> embedding_dim() const;
  void PinEmbeddingDim(std::size_t dim);

 private:
  std::optional<Json> CacheLookup(const std::string& key) const;
  void CacheStore(const std::string& key, const Json& response) const;

  ProviderConfig cfg_;
  std::shared_ptr<Transport> transport_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<std::int64_t> calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
  std::atomic<std::int64_t> attempts_{0};
  std::atomic<std::size_t> dim_{0};
};

using ProviderHandle = std::shared_ptr<ProviderClient>;

// Builds a client for cfg.endpoint after environment overrides: an HTTP
// transport for http(s) URLs, a built-in mock for mock:// URLs.
ProviderHandle MakeProvider(ProviderConfig cfg);

ProviderHandle MakeProviderWithTransport(ProviderConfig cfg,
                                         std::shared_ptr<Transport> transport);

// Content-hash cache key for (role, task, payload).
std::string CacheKey(Role role, const std::string& task, const Json& payload);

}  // namespace persuasion::providers

#endif  // PERSUASION_PROVIDERS_PROVIDER_H_
