#ifndef PERSUASION_GATEWAY_CONFIG_H_
#define PERSUASION_GATEWAY_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "persuasion/providers/provider.h"

namespace persuasion::gateway {

// Key-value configuration text:
//
//   # comment
//   listen = 127.0.0.1:8080
//   data_dir = ./arena-data
//   provider.judge.url = mock://first
//
// Keys are [a-z0-9_.]+; values run to end of line with surrounding blanks
// removed. A repeated key is an error. The environment variable
// PERSUASION_<KEY>, with dots as underscores and upper-cased, overrides a key.
class KeyValueConfig {
 public:
  struct Entry {
    std::string value;
    std::int64_t line = 0;  // 0 when set from the environment
  };

  static KeyValueConfig Parse(const std::string& text, const std::string& origin = "<config>");
  static KeyValueConfig Load(const std::filesystem::path& path);

  void ApplyEnvironment();
  void Set(const std::string& key, const std::string& value);

  bool Has(const std::string& key) const { return entries_.count(key) > 0; }
  std::optional<std::string> Get(const std::string& key) const;
  std::string GetOr(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  std::int64_t GetInt(const std::string& key, std::int64_t fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;

  const std::map<std::string, Entry>& entries() const { return entries_; }
  const std::string& origin() const { return origin_; }

 private:
  std::string Where(const std::string& key) const;

  std::string origin_;
  std::map<std::string, Entry> entries_;
};

std::string EnvironmentKey(const std::string& key);

// Provider for `role` from provider.<role>.{url,key,timeout,retries,
// max_in_flight} plus the shared provider.cache_dir; `fallback_url` is used
// when no url is configured. PROVIDER_<ROLE>_URL/_KEY still apply on top.
providers::ProviderConfig ProviderFromConfig(const KeyValueConfig& cfg, providers::Role role,
                                             const std::string& fallback_url);

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "arena-data";
  std::optional<std::string> auth_token;
  // Benchmark build that submissions are validated against; defaults to
  // <data_dir>/instances.jsonl.
  std::optional<std::filesystem::path> instances_path;
  providers::ProviderConfig judge;
  double k_factor = 4.0;
  double initial_rating = 1000.0;
  std::size_t workers = 1;

  std::filesystem::path InstancesPath() const;
};

ServiceConfig ServiceConfigFrom(const KeyValueConfig& cfg);

}  // namespace persuasion::gateway

#endif  // PERSUASION_GATEWAY_CONFIG_H_
