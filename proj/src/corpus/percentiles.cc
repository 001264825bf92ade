#include "persuasion/corpus/percentiles.h"

#include <cmath>
#include <map>

#include "persuasion/common/errors.h"
#include "persuasion/common/stats.h"

namespace persuasion::corpus {

PercentileGrouping ParseGrouping(const std::string& name) {
  if (name == "account-month") return PercentileGrouping::kAccountMonth;
  if (name == "month") return PercentileGrouping::kMonth;
  throw ConfigError("unknown percentile grouping '" + name + "'");
}

std::vector<double> MidrankPercentiles(const std::vector<double>& values) {
  std::vector<double> ranks = MidRanks(values);
  const double n = static_cast<double>(values.size());
  for (auto& r : ranks) r = 100.0 * (r - 0.5) / n;
  return ranks;
}

std::vector<PostRecord> ComputePercentiles(std::vector<PostRecord> posts,
                                           PercentileGrouping grouping) {
  SortCanonical(posts);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    std::string key = MonthKey(posts[i].created_at);
    if (grouping == PercentileGrouping::kAccountMonth) {
      key = posts[i].account_id + '\x1f' + key;
    }
    groups[key].push_back(i);
  }
  for (const auto& [key, members] : groups) {
    std::vector<double> likes;
    likes.reserve(members.size());
    for (auto i : members) likes.push_back(static_cast<double>(posts[i].like_count));
    auto pct = MidrankPercentiles(likes);
    for (std::size_t k = 0; k < members.size(); ++k) {
      posts[members[k]].like_percentile = pct[k];
    }
  }
  return posts;
}

std::string ToString(EngagementBin bin) {
  switch (bin) {
    case EngagementBin::kLow:
      return "low";
    case EngagementBin::kMedium:
      return "medium";
    case EngagementBin::kHigh:
      return "high";
  }
  return "low";
}

EngagementBin ParseEngagementBin(const std::string& name) {
  if (name == "low") return EngagementBin::kLow;
  if (name == "medium") return EngagementBin::kMedium;
  if (name == "high") return EngagementBin::kHigh;
  throw ParseError("unknown engagement bin '" + name + "'", 0);
}

EngagementBin BinPercentile(double p, BinEdges edges) {
  if (!(p >= 0.0 && p <= 100.0)) {
    throw RangeError("percentile " + std::to_string(p) + " outside [0, 100]");
  }
  if (p < edges.low_upper) return EngagementBin::kLow;
  if (p < edges.medium_upper) return EngagementBin::kMedium;
  return EngagementBin::kHigh;
}

}  // namespace persuasion::corpus
