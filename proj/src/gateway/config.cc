#include "persuasion/gateway/config.h"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "persuasion/common/errors.h"
#include "persuasion/common/jsonl.h"

namespace persuasion::gateway {
namespace {

std::string Trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool ValidKey(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '.')) {
      return false;
    }
  }
  return true;
}

// All keys the toolkit reads; anything else is a typo worth reporting.
bool KnownKey(const std::string& key) {
  static const char* kPlain[] = {"listen",  "data_dir",       "auth_token",
                                 "instances", "arena.k_factor", "arena.initial_rating",
                                 "workers", "provider.cache_dir"};
  for (const char* k : kPlain) {
    if (key == k) return true;
  }
  const std::string prefix = "provider.";
  if (key.rfind(prefix, 0) != 0) return false;
  auto dot = key.find('.', prefix.size());
  if (dot == std::string::npos) return false;
  try {
    providers::ParseRole(key.substr(prefix.size(), dot - prefix.size()));
  } catch (const Error&) {
    return false;
  }
  const std::string field = key.substr(dot + 1);
  return field == "url" || field == "key" || field == "timeout" || field == "retries" ||
         field == "max_in_flight";
}

}  // namespace

std::string EnvironmentKey(const std::string& key) {
  std::string out = "PERSUASION_";
  for (char c : key) {
    out.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

KeyValueConfig KeyValueConfig::Parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::int64_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = Trim(raw);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    auto fail = [&](const std::string& msg) {
      throw ParseError(origin + ":" + std::to_string(line) + ": " + msg, line);
    };
    if (eq == std::string::npos) fail("expected 'key = value'");
    std::string key = Trim(s.substr(0, eq));
    std::string value = Trim(s.substr(eq + 1));
    if (!ValidKey(key)) fail("invalid key '" + key + "'");
    if (!KnownKey(key)) fail("unknown key '" + key + "'");
    if (cfg.entries_.count(key)) {
      fail("duplicate key '" + key + "' (first set on line " +
           std::to_string(cfg.entries_[key].line) + ")");
    }
    cfg.entries_[key] = {value, line};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  return Parse(ReadTextFile(path), path.string());
}

void KeyValueConfig::ApplyEnvironment() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : entries_) keys.push_back(k);
  // Also let the environment supply keys that the file omits.
  for (const char* k : {"listen", "data_dir", "auth_token", "instances", "arena.k_factor",
                        "arena.initial_rating", "workers", "provider.cache_dir"}) {
    keys.push_back(k);
  }
  for (const auto& key : keys) {
    if (const char* v = std::getenv(EnvironmentKey(key).c_str())) entries_[key] = {v, 0};
  }
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  entries_[key] = {value, 0};
}

std::optional<std::string> KeyValueConfig::Get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::string KeyValueConfig::GetOr(const std::string& key, const std::string& fallback) const {
  return Get(key).value_or(fallback);
}

std::string KeyValueConfig::Where(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.line == 0) return EnvironmentKey(key);
  return origin_ + ":" + std::to_string(it->second.line);
}

double KeyValueConfig::GetDouble(const std::string& key, double fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    double d = std::stod(*v, &used);
    if (used == v->size()) return d;
  } catch (const std::exception&) {
  }
  auto it = entries_.find(key);
  throw ParseError(Where(key) + ": '" + key + "' expects a number, got '" + *v + "'",
                   it->second.line);
}

std::int64_t KeyValueConfig::GetInt(const std::string& key, std::int64_t fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    long long n = std::stoll(*v, &used);
    if (used == v->size()) return n;
  } catch (const std::exception&) {
  }
  auto it = entries_.find(key);
  throw ParseError(Where(key) + ": '" + key + "' expects an integer, got '" + *v + "'",
                   it->second.line);
}

bool KeyValueConfig::GetBool(const std::string& key, bool fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  auto it = entries_.find(key);
  throw ParseError(Where(key) + ": '" + key + "' expects true or false, got '" + *v + "'",
                   it->second.line);
}

providers::ProviderConfig ProviderFromConfig(const KeyValueConfig& cfg, providers::Role role,
                                             const std::string& fallback_url) {
  const std::string base = "provider." + providers::ToString(role) + ".";
  providers::ProviderConfig p;
  p.role = role;
  p.endpoint = cfg.GetOr(base + "url", fallback_url);
  p.api_key = cfg.GetOr(base + "key", "");
  p.timeout_seconds = cfg.GetDouble(base + "timeout", p.timeout_seconds);
  p.max_retries = static_cast<int>(cfg.GetInt(base + "retries", p.max_retries));
  p.max_in_flight = static_cast<int>(cfg.GetInt(base + "max_in_flight", p.max_in_flight));
  if (auto dir = cfg.Get("provider.cache_dir")) p.cache_dir = *dir;
  return providers::WithEnvironmentOverrides(p);
}

std::filesystem::path ServiceConfig::InstancesPath() const {
  return instances_path ? *instances_path : data_dir / "instances.jsonl";
}

ServiceConfig ServiceConfigFrom(const KeyValueConfig& cfg) {
  ServiceConfig s;
  if (auto listen = cfg.Get("listen")) {
    auto colon = listen->rfind(':');
    if (colon == std::string::npos) {
      throw ConfigError("listen must be host:port, got '" + *listen + "'");
    }
    s.host = listen->substr(0, colon);
    try {
      s.port = std::stoi(listen->substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("listen must be host:port, got '" + *listen + "'");
    }
    if (s.port < 0 || s.port > 65535) throw ConfigError("listen port out of range");
  }
  s.data_dir = cfg.GetOr("data_dir", s.data_dir.string());
  if (auto token = cfg.Get("auth_token"); token && !token->empty()) s.auth_token = *token;
  if (auto inst = cfg.Get("instances")) s.instances_path = *inst;
  s.judge = ProviderFromConfig(cfg, providers::Role::kJudge, "mock://first");
  s.k_factor = cfg.GetDouble("arena.k_factor", s.k_factor);
  s.initial_rating = cfg.GetDouble("arena.initial_rating", s.initial_rating);
  s.workers = static_cast<std::size_t>(cfg.GetInt("workers", 1));
  if (!(s.k_factor > 0.0)) throw ConfigError("arena.k_factor must be positive");
  return s;
}

}  // namespace persuasion::gateway
