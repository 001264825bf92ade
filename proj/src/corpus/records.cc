#include "persuasion/corpus/records.h"

#include <algorithm>
#include <tuple>

#include "persuasion/common/errors.h"

namespace persuasion::corpus {
namespace {

const Json& Require(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + field + "'", 0);
  }
  return *it;
}

std::vector<std::string> StringList(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return {};
  return it->get<std::vector<std::string>>();
}

}  // namespace

std::string ToString(AccountCategory category) {
  switch (category) {
    case AccountCategory::kCompany:
      return "company";
    case AccountCategory::kOrganization:
      return "organization";
    case AccountCategory::kGroup:
      return "group";
    case AccountCategory::kPerson:
      return "person";
    case AccountCategory::kOther:
      return "other";
    case AccountCategory::kUnclassified:
      return "unclassified";
  }
  return "unclassified";
}

AccountCategory ParseAccountCategory(const std::string& name) {
  for (auto c : {AccountCategory::kCompany, AccountCategory::kOrganization,
                 AccountCategory::kGroup, AccountCategory::kPerson,
                 AccountCategory::kOther, AccountCategory::kUnclassified}) {
    if (ToString(c) == name) return c;
  }
  throw ParseError("unknown account category '" + name + "'", 0);
}

Json ToJson(const MediaAsset& asset) {
  Json j;
  j["asset_id"] = asset.asset_id;
  j["caption"] = asset.caption ? Json(*asset.caption) : Json(nullptr);
  j["keywords"] = asset.keywords;
  return j;
}

Json ToJson(const PostRecord& post) {
  Json j;
  j["post_id"] = post.post_id;
  j["account_id"] = post.account_id;
  j["created_at"] = FormatTimestamp(post.created_at);
  j["text"] = post.text;
  Json media = Json::array();
  for (const auto& m : post.media) media.push_back(ToJson(m));
  j["media"] = std::move(media);
  j["like_count"] = post.like_count;
  j["link_domains"] = post.link_domains;
  j["hashtags"] = post.hashtags;
  j["mentions"] = post.mentions;
  j["links"] = post.links;
  j["like_percentile"] =
      post.like_percentile ? Json(*post.like_percentile) : Json(nullptr);
  j["normalized"] = post.normalized;
  return j;
}

Json ToJson(const AccountRecord& account) {
  Json j;
  j["account_id"] = account.account_id;
  j["display_name"] = account.display_name;
  j["bio"] = account.bio;
  j["category"] = ToString(account.category);
  j["total_posts"] = account.total_posts;
  j["max_posts_per_day"] = account.max_posts_per_day;
  j["news_share"] = account.news_share ? Json(*account.news_share) : Json(nullptr);
  return j;
}

Json ToJson(const FilterReport& report) {
  Json stages = Json::array();
  for (const auto& s : report.stages) {
    Json reasons = Json::object();
    for (const auto& [reason, count] : s.removal_reasons) reasons[reason] = count;
    stages.push_back({{"stage", s.stage},
                      {"input_count", s.input_count},
                      {"output_count", s.output_count},
                      {"removal_reasons", std::move(reasons)}});
  }
  return Json{{"stages", std::move(stages)}};
}

MediaAsset MediaFromJson(const Json& j) {
  MediaAsset m;
  if (j.is_string()) {
    m.asset_id = j.get<std::string>();
    return m;
  }
  m.asset_id = Require(j, "asset_id").get<std::string>();
  if (auto it = j.find("caption"); it != j.end() && !it->is_null()) {
    m.caption = it->get<std::string>();
  }
  m.keywords = StringList(j, "keywords");
  return m;
}

PostRecord PostFromJson(const Json& j) {
  PostRecord p;
  p.post_id = Require(j, "post_id").get<std::string>();
  p.account_id = Require(j, "account_id").get<std::string>();
  const std::string created = Require(j, "created_at").get<std::string>();
  auto ts = ParseTimestamp(created);
  if (!ts) throw ParseError("malformed created_at '" + created + "'", 0);
  p.created_at = *ts;
  p.text = Require(j, "text").get<std::string>();
  if (auto it = j.find("media"); it != j.end() && it->is_array()) {
    for (const auto& m : *it) p.media.push_back(MediaFromJson(m));
  }
  p.like_count = Require(j, "like_count").get<std::int64_t>();
  p.link_domains = StringList(j, "link_domains");
  p.hashtags = StringList(j, "hashtags");
  p.mentions = StringList(j, "mentions");
  p.links = StringList(j, "links");
  if (auto it = j.find("like_percentile"); it != j.end() && !it->is_null()) {
    p.like_percentile = it->get<double>();
  }
  p.normalized = j.value("normalized", false);
  return p;
}

AccountRecord AccountFromJson(const Json& j) {
  AccountRecord a;
  a.account_id = Require(j, "account_id").get<std::string>();
  a.display_name = j.value("display_name", std::string());
  a.bio = j.value("bio", std::string());
  a.category = ParseAccountCategory(j.value("category", std::string("unclassified")));
  a.total_posts = j.value("total_posts", std::int64_t{0});
  a.max_posts_per_day = j.value("max_posts_per_day", 0.0);
  if (auto it = j.find("news_share"); it != j.end() && !it->is_null()) {
    a.news_share = it->get<double>();
  }
  return a;
}

void SortCanonical(std::vector<PostRecord>& posts) {
  std::sort(posts.begin(), posts.end(),
            [](const PostRecord& a, const PostRecord& b) {
              return std::tie(a.account_id, a.created_at, a.post_id) <
                     std::tie(b.account_id, b.created_at, b.post_id);
            });
}

std::vector<PostRecord> ReadPosts(const std::filesystem::path& path) {
  std::vector<PostRecord> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(PostFromJson(line.value));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    } catch (const Json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    }
  }
  return out;
}

void WritePosts(const std::filesystem::path& path,
                const std::vector<PostRecord>& posts) {
  std::vector<Json> lines;
  lines.reserve(posts.size());
  for (const auto& p : posts) lines.push_back(ToJson(p));
  WriteJsonLinesFile(path, lines);
}

std::vector<AccountRecord> ReadAccounts(const std::filesystem::path& path) {
  std::vector<AccountRecord> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(AccountFromJson(line.value));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    }
  }
  return out;
}

void WriteAccounts(const std::filesystem::path& path,
                   const std::vector<AccountRecord>& accounts) {
  std::vector<Json> lines;
  for (const auto& a : accounts) lines.push_back(ToJson(a));
  WriteJsonLinesFile(path, lines);
}

}  // namespace persuasion::corpus
