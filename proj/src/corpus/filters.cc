#include "persuasion/corpus/filters.h"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "persuasion/common/errors.h"
#include "persuasion/corpus/text.h"
#include "persuasion/providers/operations.h"

namespace persuasion::corpus {
namespace {

// Applies one stage: items for which `reject` returns a reason are dropped.
template <typename T>
std::vector<T> RunStage(
    std::vector<T> items, const std::string& stage,
    const std::function<std::optional<std::string>(const T&)>& reject,
    FilterReport* report) {
  StageReport sr;
  sr.stage = stage;
  sr.input_count = static_cast<std::int64_t>(items.size());
  std::vector<T> kept;
  kept.reserve(items.size());
  for (auto& item : items) {
    if (auto reason = reject(item)) {
      ++sr.removal_reasons[*reason];
    } else {
      kept.push_back(std::move(item));
    }
  }
  sr.output_count = static_cast<std::int64_t>(kept.size());
  report->stages.push_back(std::move(sr));
  return kept;
}

}  // namespace

int WordCount(std::string_view text) {
  return static_cast<int>(SplitWhitespace(text).size());
}

std::pair<std::vector<PostRecord>, FilterReport> FilterPosts(
    const std::vector<PostRecord>& posts, const PostFilterOptions& options) {
  using Reject = std::function<std::optional<std::string>(const PostRecord&)>;
  FilterReport report;
  std::vector<PostRecord> current = posts;
  current = RunStage<PostRecord>(
      std::move(current), "reply",
      Reject([](const PostRecord& p) -> std::optional<std::string> {
        if (!p.text.empty() && p.text.front() == '@') return "reply";
        return std::nullopt;
      }),
      &report);
  const Timestamp cutoff{options.cutoff_date};
  current = RunStage<PostRecord>(
      std::move(current), "date",
      Reject([&](const PostRecord& p) -> std::optional<std::string> {
        if (p.created_at < cutoff) return "before_cutoff";
        return std::nullopt;
      }),
      &report);
  current = RunStage<PostRecord>(
      std::move(current), "words",
      Reject([&](const PostRecord& p) -> std::optional<std::string> {
        const std::string text = p.normalized ? p.text : NormalizeText(p.text);
        if (WordCount(text) < options.min_words) return "too_few_words";
        return std::nullopt;
      }),
      &report);
  current = RunStage<PostRecord>(
      std::move(current), "likes",
      Reject([&](const PostRecord& p) -> std::optional<std::string> {
        if (p.like_count < options.min_likes) return "too_few_likes";
        return std::nullopt;
      }),
      &report);
  return {std::move(current), std::move(report)};
}

void NormalizePosts(std::vector<PostRecord>& posts) {
  for (auto& p : posts) {
    if (p.normalized) continue;
    p.text = NormalizeText(p.text);
    p.normalized = true;
  }
}

ProfileResult ProfileAccounts(const std::vector<PostRecord>& posts,
                              const std::vector<AccountRecord>& accounts,
                              providers::ProviderClient& news_classifier) {
  std::unordered_map<std::string, std::vector<const PostRecord*>> by_account;
  for (const auto& p : posts) by_account[p.account_id].push_back(&p);

  ProfileResult result;
  for (AccountRecord account : accounts) {
    auto it = by_account.find(account.account_id);
    if (it == by_account.end()) {
      account.total_posts = 0;
      account.max_posts_per_day = 0.0;
      account.news_share = 0.0;
      result.accounts.push_back(std::move(account));
      continue;
    }
    const auto& own = it->second;
    account.total_posts = static_cast<std::int64_t>(own.size());
    std::map<Date, int> per_day;
    for (const auto* p : own) ++per_day[DayOf(p->created_at)];
    int max_daily = 0;
    for (const auto& [day, n] : per_day) max_daily = std::max(max_daily, n);
    account.max_posts_per_day = max_daily;
    try {
      std::int64_t news = 0;
      for (const auto* p : own) {
        if (providers::Classify(p->text, kNewsLabels, news_classifier) == "news") {
          ++news;
        }
      }
      account.news_share =
          static_cast<double>(news) / static_cast<double>(own.size());
    } catch (const ContractError&) {
      throw;
    } catch (const std::exception& e) {
      account.news_share.reset();
      result.errors.push_back({account.account_id, e.what()});
    }
    result.accounts.push_back(std::move(account));
  }
  return result;
}

std::vector<AccountRecord> ClassifyAccounts(
    const std::vector<AccountRecord>& accounts, const std::string& prompt_body,
    providers::ProviderClient& classifier) {
  static const std::vector<std::string> kLabels = {
      "company", "organization", "group", "person", "other"};
  std::vector<AccountRecord> out = accounts;
  for (auto& account : out) {
    std::string prompt = prompt_body;
    auto replace = [&](const std::string& key, const std::string& value) {
      for (auto pos = prompt.find(key); pos != std::string::npos;
           pos = prompt.find(key, pos + value.size())) {
        prompt.replace(pos, key.size(), value);
      }
    };
    replace("{USERNAME}", account.account_id + " ");
    replace("{DESCRIPTION}", account.bio);
    std::string label = providers::Classify(prompt, kLabels, classifier);
    try {
      account.category = ParseAccountCategory(label);
    } catch (const ParseError&) {
      account.category = AccountCategory::kUnclassified;
    }
  }
  return out;
}

std::pair<std::vector<AccountRecord>, FilterReport> FilterAccounts(
    const std::vector<AccountRecord>& accounts,
    const AccountFilterOptions& options) {
  using Reject = std::function<std::optional<std::string>(const AccountRecord&)>;
  FilterReport report;
  std::vector<AccountRecord> current = accounts;
  current = RunStage<AccountRecord>(
      std::move(current), "min_posts",
      Reject([&](const AccountRecord& a) -> std::optional<std::string> {
        if (a.total_posts < options.min_posts) return "below_min_posts";
        return std::nullopt;
      }),
      &report);
  current = RunStage<AccountRecord>(
      std::move(current), "max_daily",
      Reject([&](const AccountRecord& a) -> std::optional<std::string> {
        if (a.max_posts_per_day > options.max_daily) return "above_max_daily";
        return std::nullopt;
      }),
      &report);
  current = RunStage<AccountRecord>(
      std::move(current), "news_share",
      Reject([&](const AccountRecord& a) -> std::optional<std::string> {
        if (!a.news_share) return "news_share_unset";
        if (*a.news_share > options.max_news_share) return "news_heavy";
        return std::nullopt;
      }),
      &report);
  current = RunStage<AccountRecord>(
      std::move(current), "category",
      Reject([&](const AccountRecord& a) -> std::optional<std::string> {
        if (options.allowed_categories.empty()) return std::nullopt;
        if (a.category == AccountCategory::kUnclassified) return "unclassified";
        if (!options.allowed_categories.contains(a.category)) {
          return "category_" + ToString(a.category);
        }
        return std::nullopt;
      }),
      &report);
  return {std::move(current), std::move(report)};
}

}  // namespace persuasion::corpus
