#ifndef PERSUASION_CORPUS_FILTERS_H_
#define PERSUASION_CORPUS_FILTERS_H_

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/corpus/records.h"
#include "persuasion/providers/provider.h"

namespace persuasion::corpus {

struct PostFilterOptions {
  Date cutoff_date = Date{std::chrono::year{2015} / 1 / 1};
  int min_words = 5;
  std::int64_t min_likes = 4;
};

// Stages, in order: reply (raw text starts with '@'), date (before
// cutoff), words (fewer than min_words whitespace tokens after
// normalization), likes (like_count < min_likes). Does not modify posts.
std::pair<std::vector<PostRecord>, FilterReport> FilterPosts(
    const std::vector<PostRecord>& posts, const PostFilterOptions& options);

// Replaces text with its normalized form and sets normalized=true.
void NormalizePosts(std::vector<PostRecord>& posts);

int WordCount(std::string_view text);

struct AccountProfileError {
  std::string account_id;
  std::string message;
};

struct ProfileResult {
  std::vector<AccountRecord> accounts;
  // Accounts whose news classification failed; news_share stays unset and
  // the account should be profiled again.
  std::vector<AccountProfileError> errors;
};

inline const std::vector<std::string> kNewsLabels = {"news", "not_news"};

// Fills total_posts, max_posts_per_day (over UTC calendar days) and
// news_share (fraction of the account's posts the classifier labels "news").
ProfileResult ProfileAccounts(const std::vector<PostRecord>& posts,
                              const std::vector<AccountRecord>& accounts,
                              providers::ProviderClient& news_classifier);

// Sets each account's category from the classifier's answer to the
// username-classification prompt. Unparseable answers stay unclassified.
std::vector<AccountRecord> ClassifyAccounts(
    const std::vector<AccountRecord>& accounts, const std::string& prompt_body,
    providers::ProviderClient& classifier);

struct AccountFilterOptions {
  std::int64_t min_posts = 100;
  double max_daily = 10.0;
  double max_news_share = 0.20;
  std::set<AccountCategory> allowed_categories = {
      AccountCategory::kCompany, AccountCategory::kOrganization,
      AccountCategory::kOther};
};

// Keep-side thresholds are inclusive. Stages: min_posts, max_daily,
// news_share, category.
std::pair<std::vector<AccountRecord>, FilterReport> FilterAccounts(
    const std::vector<AccountRecord>& accounts,
    const AccountFilterOptions& options);

}  // namespace persuasion::corpus

#endif  // PERSUASION_CORPUS_FILTERS_H_
