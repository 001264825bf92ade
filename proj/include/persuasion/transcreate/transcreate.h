#ifndef PERSUASION_TRANSCREATE_TRANSCREATE_H_
#define PERSUASION_TRANSCREATE_TRANSCREATE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "persuasion/common/jsonl.h"
#include "persuasion/corpus/records.h"
#include "persuasion/providers/operations.h"

namespace persuasion::transcreate {

struct AccountSignature {
  std::string account_id;
  std::set<std::string> bag;
};

// Minimum per-account frequency for a content word to enter the bag.
inline constexpr int kKeywordMinFrequency = 3;

// One signature per account in `accounts`, plus any account that only
// appears in `posts`; sorted by account_id. Bag tokens: "#tag", "@handle",
// registrable link domains, and content words used at least
// kKeywordMinFrequency times by that account.
std::vector<AccountSignature> BuildSignatures(
    const std::vector<corpus::PostRecord>& posts,
    const std::vector<corpus::AccountRecord>& accounts, std::size_t workers = 1);

struct CompanyGroup {
  std::string group_id;               // "g:" + smallest member id
  std::vector<std::string> accounts;  // sorted
};

struct GroupingResult {
  std::vector<CompanyGroup> groups;  // sorted by group_id
  // Singletons the assistant attached, account -> group_id.
  std::map<std::string, std::string> assisted;
  // Assistant failures, account -> message.
  std::map<std::string, std::string> errors;
};

// Union-find over all signature pairs with Jaccard >= jaccard_min. When
// `assistant` (a classifier) is given, each remaining singleton is offered
// the existing multi-account groups through the username-mapping prompt and
// joins the one it names. `accounts` supplies names and bios for that
// prompt and may be empty.
GroupingResult GroupAccounts(
    const std::vector<AccountSignature>& signatures, double jaccard_min,
    providers::ProviderClient* assistant = nullptr,
    const std::vector<corpus::AccountRecord>& accounts = {});

Json ToJson(const std::vector<CompanyGroup>& groups);
std::vector<CompanyGroup> GroupsFromJson(const Json& j);

struct TranscreationThresholds {
  double cosine_min = 0.8;
  double delta_percentile_min = 40.0;
  int max_pairs_per_post = 20;
};

struct TranscreationPair {
  corpus::PostRecord t1;
  std::string u1;
  corpus::PostRecord t2;
  std::string u2;
  double cosine = 0.0;
  std::string company_group;
  double percentile_gap = 0.0;

  std::string pair_id() const { return t1.post_id + "|" + t2.post_id; }
};

Json ToJson(const TranscreationPair& pair);
TranscreationPair TranscreationPairFromJson(const Json& j);

using EmbedFn = std::function<providers::EmbeddingVector(const std::string&)>;

// Cross-account pairs inside each group: lower-percentile post first,
// cosine > cosine_min, gap >= delta_percentile_min, then the same greedy
// multiplicity cap as same-account mining. Output sorted by
// (group, t1.account, t1.created_at, t1.post_id, t2.post_id).
std::vector<TranscreationPair> MineTranscreationPairs(
    const std::vector<corpus::PostRecord>& posts,
    const std::vector<CompanyGroup>& groups, const EmbedFn& embed,
    const TranscreationThresholds& thresholds = {}, std::size_t workers = 1);
std::vector<TranscreationPair> MineTranscreationPairs(
    const std::vector<corpus::PostRecord>& posts,
    const std::vector<CompanyGroup>& groups, providers::ProviderClient& embedder,
    const TranscreationThresholds& thresholds = {}, std::size_t workers = 1);

void WriteTranscreationPairs(const std::filesystem::path& path,
                             const std::vector<TranscreationPair>& pairs);
std::vector<TranscreationPair> ReadTranscreationPairs(
    const std::filesystem::path& path);

}  // namespace persuasion::transcreate

#endif  // PERSUASION_TRANSCREATE_TRANSCREATE_H_
