#ifndef PERSUASION_CORPUS_RECORDS_H_
#define PERSUASION_CORPUS_RECORDS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/common/jsonl.h"
#include "persuasion/common/timeutil.h"

namespace persuasion::corpus {

// A media attachment verbalized as text. The caption is set once by the
// captioner and never changed afterwards.
struct MediaAsset {
  std::string asset_id;
  std::optional<std::string> caption;
  std::vector<std::string> keywords;

  friend bool operator==(const MediaAsset&, const MediaAsset&) = default;
};

struct PostRecord {
  std::string post_id;
  std::string account_id;
  Timestamp created_at{};
  std::string text;
  std::vector<MediaAsset> media;
  std::int64_t like_count = 0;
  std::vector<std::string> link_domains;
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  // Normalized link keys (host + path) used for shared-link matching.
  std::vector<std::string> links;
  std::optional<double> like_percentile;
  bool normalized = false;

  bool has_media() const { return !media.empty(); }

  friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

enum class AccountCategory {
  kCompany,
  kOrganization,
  kGroup,
  kPerson,
  kOther,
  kUnclassified,
};

std::string ToString(AccountCategory category);
// Throws ParseError on an unknown name.
AccountCategory ParseAccountCategory(const std::string& name);

struct AccountRecord {
  std::string account_id;
  std::string display_name;
  std::string bio;
  AccountCategory category = AccountCategory::kUnclassified;
  std::int64_t total_posts = 0;
  double max_posts_per_day = 0.0;
  std::optional<double> news_share;

  friend bool operator==(const AccountRecord&, const AccountRecord&) = default;
};

struct StageReport {
  std::string stage;
  std::int64_t input_count = 0;
  std::int64_t output_count = 0;
  std::map<std::string, std::int64_t> removal_reasons;
};

// Per-stage accounting of a filter pass; stages are in execution order.
struct FilterReport {
  std::vector<StageReport> stages;
};

Json ToJson(const MediaAsset& asset);
Json ToJson(const PostRecord& post);
Json ToJson(const AccountRecord& account);
Json ToJson(const FilterReport& report);

MediaAsset MediaFromJson(const Json& j);
// Reads the full PostRecord wire form written by ToJson.
PostRecord PostFromJson(const Json& j);
AccountRecord AccountFromJson(const Json& j);

// Sorts by (account_id, created_at, post_id), the order every stage emits.
void SortCanonical(std::vector<PostRecord>& posts);

std::vector<PostRecord> ReadPosts(const std::filesystem::path& path);
void WritePosts(const std::filesystem::path& path,
                const std::vector<PostRecord>& posts);
std::vector<AccountRecord> ReadAccounts(const std::filesystem::path& path);
void WriteAccounts(const std::filesystem::path& path,
                   const std::vector<AccountRecord>& accounts);

}  // namespace persuasion::corpus

#endif  // PERSUASION_CORPUS_RECORDS_H_
