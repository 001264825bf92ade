#include "persuasion/benchkit/splits.h"

#include <algorithm>
#include <map>

#include "persuasion/common/errors.h"
#include "persuasion/common/hashing.h"
#include "persuasion/corpus/text.h"

namespace persuasion::benchkit {
namespace {

using corpus::PostRecord;
using pairminer::TranssuasionPair;

std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string ToString(SplitRegime regime) {
  switch (regime) {
    case SplitRegime::kRandom: return "random";
    case SplitRegime::kBrand: return "brand";
    case SplitRegime::kTime: return "time";
  }
  return "random";
}

SplitRegime ParseSplitRegime(const std::string& name) {
  std::string n = corpus::ToLowerAscii(name);
  if (n == "random") return SplitRegime::kRandom;
  if (n == "brand") return SplitRegime::kBrand;
  if (n == "time") return SplitRegime::kTime;
  throw ConfigError("unknown split regime '" + name + "'");
}

SplitSpec SplitSpecFromJson(const Json& j) {
  SplitSpec s;
  s.regime = ParseSplitRegime(j.value("regime", std::string("random")));
  s.holdout_accounts = j.value("holdout_accounts", std::set<std::string>{});
  if (j.contains("cutoff_date") && j["cutoff_date"].is_string()) {
    auto d = ParseDate(j["cutoff_date"].get<std::string>());
    if (!d) throw ConfigError("bad cutoff_date in split spec");
    s.cutoff_date = *d;
  }
  s.seed = j.value("seed", std::uint64_t{0});
  s.test_fraction = j.value("test_fraction", 0.2);
  return s;
}

Json ToJson(const SplitSpec& s) {
  Json j = {{"regime", ToString(s.regime)},
            {"holdout_accounts", s.holdout_accounts},
            {"seed", s.seed},
            {"test_fraction", s.test_fraction}};
  j["cutoff_date"] = s.cutoff_date ? Json(FormatDate(*s.cutoff_date)) : Json(nullptr);
  return j;
}

double HashUnit(const std::string& key, std::uint64_t seed) {
  std::uint64_t h = Mix(Fnv1a64(key, 0xcbf29ce484222325ULL ^ Mix(seed)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::set<std::string> SplitResult::TestPostIds() const {
  std::set<std::string> out;
  for (const auto& p : test_posts) out.insert(p.post_id);
  return out;
}

SplitResult MakeSplits(const std::vector<TranssuasionPair>& pairs,
                       const std::vector<PostRecord>& posts, const SplitSpec& spec) {
  if (!(spec.test_fraction >= 0.0 && spec.test_fraction <= 1.0)) {
    throw ConfigError("test_fraction must lie in [0,1]");
  }
  // post_id -> is test
  std::map<std::string, bool> side;
  switch (spec.regime) {
    case SplitRegime::kRandom: {
      for (const auto& p : pairs) {
        if (HashUnit("pair:" + p.pair_id(), spec.seed) < spec.test_fraction) {
          side[p.t1.post_id] = true;
          side[p.t2.post_id] = true;
        }
      }
      // Unselected pairs keep their posts together on the train side.
      for (const auto& p : pairs) {
        side.emplace(p.t1.post_id, false);
        side.emplace(p.t2.post_id, false);
      }
      for (const auto& p : posts) {
        if (!side.count(p.post_id)) {
          side[p.post_id] = HashUnit("post:" + p.post_id, spec.seed) < spec.test_fraction;
        }
      }
      break;
    }
    case SplitRegime::kBrand: {
      for (const auto& p : posts) {
        bool held = spec.holdout_accounts.empty()
                        ? HashUnit("account:" + p.account_id, spec.seed) < spec.test_fraction
                        : spec.holdout_accounts.count(p.account_id) > 0;
        side[p.post_id] = held;
      }
      break;
    }
    case SplitRegime::kTime: {
      if (!spec.cutoff_date) throw ConfigError("time split needs a cutoff date");
      for (const auto& p : posts) side[p.post_id] = DayOf(p.created_at) >= *spec.cutoff_date;
      break;
    }
  }

  SplitResult out;
  out.tag = ToString(spec.regime);
  for (const auto& p : posts) {
    (side.at(p.post_id) ? out.test_posts : out.train_posts).push_back(p);
  }
  auto side_of = [&](const PostRecord& p) {
    auto it = side.find(p.post_id);
    if (it != side.end()) return it->second;
    // Pair members missing from `posts` follow the regime rule directly.
    switch (spec.regime) {
      case SplitRegime::kBrand:
        return spec.holdout_accounts.empty()
                   ? HashUnit("account:" + p.account_id, spec.seed) < spec.test_fraction
                   : spec.holdout_accounts.count(p.account_id) > 0;
      case SplitRegime::kTime:
        return DayOf(p.created_at) >= *spec.cutoff_date;
      case SplitRegime::kRandom:
        return HashUnit("post:" + p.post_id, spec.seed) < spec.test_fraction;
    }
    return false;
  };
  for (const auto& p : pairs) {
    bool a = side_of(p.t1), b = side_of(p.t2);
    if (a != b) {
      ++out.dropped_pairs;
    } else {
      (a ? out.test_pairs : out.train_pairs).push_back(p);
    }
  }
  if (out.train_posts.empty() && out.train_pairs.empty()) {
    throw ConfigError("split leaves the train side empty");
  }
  return out;
}

void CheckSplitLeakage(const SplitResult& split, const SplitSpec& spec) {
  std::set<std::string> train_ids, test_ids = split.TestPostIds();
  for (const auto& p : split.train_posts) train_ids.insert(p.post_id);
  for (const auto& p : split.train_pairs) {
    train_ids.insert(p.t1.post_id);
    train_ids.insert(p.t2.post_id);
  }
  for (const auto& p : split.test_pairs) {
    test_ids.insert(p.t1.post_id);
    test_ids.insert(p.t2.post_id);
  }
  for (const auto& id : test_ids) {
    if (train_ids.count(id)) throw LeakageError("post '" + id + "' is on both sides");
  }
  if (spec.regime == SplitRegime::kBrand) {
    std::set<std::string> train_accounts;
    for (const auto& p : split.train_posts) train_accounts.insert(p.account_id);
    for (const auto& p : split.train_pairs) train_accounts.insert(p.t1.account_id);
    auto check = [&](const PostRecord& p) {
      if (train_accounts.count(p.account_id)) {
        throw LeakageError("account '" + p.account_id + "' is on both sides");
      }
    };
    for (const auto& p : split.test_posts) check(p);
    for (const auto& p : split.test_pairs) check(p.t1);
  }
  if (spec.regime == SplitRegime::kTime && spec.cutoff_date) {
    auto check = [&](const PostRecord& p, bool test) {
      bool after = DayOf(p.created_at) >= *spec.cutoff_date;
      if (after != test) {
        throw LeakageError("post '" + p.post_id + "' is on the wrong side of the cutoff");
      }
    };
    for (const auto& p : split.test_posts) check(p, true);
    for (const auto& p : split.train_posts) check(p, false);
    for (const auto& p : split.test_pairs) {
      check(p.t1, true);
      check(p.t2, true);
    }
    for (const auto& p : split.train_pairs) {
      check(p.t1, false);
      check(p.t2, false);
    }
  }
}

Json SplitSummaryJson(const SplitResult& s) {
  return {{"regime", s.tag},
          {"train_posts", s.train_posts.size()},
          {"test_posts", s.test_posts.size()},
          {"train_pairs", s.train_pairs.size()},
          {"test_pairs", s.test_pairs.size()},
          {"dropped_pairs", s.dropped_pairs}};
}

}  // namespace persuasion::benchkit
