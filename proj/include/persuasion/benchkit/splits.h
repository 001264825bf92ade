#ifndef PERSUASION_BENCHKIT_SPLITS_H_
#define PERSUASION_BENCHKIT_SPLITS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "persuasion/common/jsonl.h"
#include "persuasion/common/timeutil.h"
#include "persuasion/pairminer/pairs.h"

namespace persuasion::benchkit {

enum class SplitRegime { kRandom, kBrand, kTime };
std::string ToString(SplitRegime regime);
SplitRegime ParseSplitRegime(const std::string& name);

struct SplitSpec {
  SplitRegime regime = SplitRegime::kRandom;
  // Brand regime. When empty, accounts are held out by seeded hash with
  // probability test_fraction.
  std::set<std::string> holdout_accounts;
  // Time regime: posts at or after this date are test.
  std::optional<Date> cutoff_date;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
};

SplitSpec SplitSpecFromJson(const Json& j);
Json ToJson(const SplitSpec& spec);

struct SplitResult {
  std::string tag;  // regime name
  std::vector<corpus::PostRecord> train_posts;
  std::vector<corpus::PostRecord> test_posts;
  std::vector<pairminer::TranssuasionPair> train_pairs;
  std::vector<pairminer::TranssuasionPair> test_pairs;
  // Pairs whose two posts fell on different sides.
  std::int64_t dropped_pairs = 0;

  std::set<std::string> TestPostIds() const;
};

// Deterministic in (pairs, posts, spec). Random regime: pairs are assigned by
// seeded hash of pair_id and pull their posts into test, other pairs hold
// their posts in train, and the remaining posts are assigned by hash of
// post_id. In every regime a pair is kept only when
// both posts land on the same side. ConfigError when train ends up empty or
// the time regime lacks a cutoff.
SplitResult MakeSplits(const std::vector<pairminer::TranssuasionPair>& pairs,
                       const std::vector<corpus::PostRecord>& posts,
                       const SplitSpec& spec);

// LeakageError when a post id sits on both sides, a test pair uses a train
// post, the brand regime shares an account across sides, or the time regime
// has a test post dated before the cutoff.
void CheckSplitLeakage(const SplitResult& split, const SplitSpec& spec);

// Uniform in [0,1) from a seeded string hash.
double HashUnit(const std::string& key, std::uint64_t seed);

Json SplitSummaryJson(const SplitResult& split);

}  // namespace persuasion::benchkit

#endif  // PERSUASION_BENCHKIT_SPLITS_H_
