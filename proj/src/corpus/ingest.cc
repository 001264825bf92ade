#include "persuasion/corpus/ingest.h"

#include <algorithm>
#include <unordered_map>

#include "persuasion/corpus/text.h"

namespace persuasion::corpus {
namespace {

std::vector<std::string> Dedup(std::vector<std::string> items) {
  std::vector<std::string> out;
  for (auto& item : items) {
    if (std::find(out.begin(), out.end(), item) == out.end()) {
      out.push_back(std::move(item));
    }
  }
  return out;
}

ParseError RecordError(std::int64_t line, const std::string& what) {
  return ParseError("record at line " + std::to_string(line) + ": " + what,
                    line);
}

PostRecord ParseRecord(const JsonLine& record) {
  const Json& j = record.value;
  if (!j.is_object()) throw RecordError(record.line, "not a JSON object");
  for (const char* field :
       {"post_id", "account_id", "created_at", "text", "like_count"}) {
    if (!j.contains(field)) {
      throw RecordError(record.line, std::string("missing field '") + field + "'");
    }
  }
  PostRecord post;
  try {
    post.post_id = j.at("post_id").get<std::string>();
    post.account_id = j.at("account_id").get<std::string>();
    post.text = j.at("text").get<std::string>();
    post.like_count = j.at("like_count").get<std::int64_t>();
  } catch (const Json::exception& e) {
    throw RecordError(record.line, e.what());
  }
  if (post.like_count < 0) {
    throw RecordError(record.line, "negative like_count");
  }
  const Json& created = j.at("created_at");
  auto ts = created.is_string() ? ParseTimestamp(created.get<std::string>())
                                : std::nullopt;
  if (!ts) {
    throw RecordError(record.line,
                      "malformed timestamp " + created.dump());
  }
  post.created_at = *ts;
  if (auto it = j.find("media"); it != j.end() && it->is_array()) {
    try {
      for (const auto& m : *it) post.media.push_back(MediaFromJson(m));
    } catch (const std::exception& e) {
      throw RecordError(record.line, std::string("bad media: ") + e.what());
    }
  }

  for (auto& tag : FindSigilTokens(post.text, '#')) {
    post.hashtags.push_back(ToLowerAscii(tag));
  }
  for (auto& handle : FindSigilTokens(post.text, '@')) {
    post.mentions.push_back(ToLowerAscii(handle));
  }
  for (auto [b, e] : FindUrls(post.text)) {
    auto url = std::string_view(post.text).substr(b, e - b);
    post.link_domains.push_back(RegistrableDomain(LinkHost(url)));
    post.links.push_back(NormalizeLinkKey(url));
  }
  post.hashtags = Dedup(std::move(post.hashtags));
  post.mentions = Dedup(std::move(post.mentions));
  post.link_domains = Dedup(std::move(post.link_domains));
  post.links = Dedup(std::move(post.links));
  return post;
}

}  // namespace

DuplicatePostError::DuplicatePostError(const std::string& post_id,
                                       std::int64_t first_line,
                                       std::int64_t second_line)
    : Error("duplicate", "duplicate post_id '" + post_id + "' at lines " +
                             std::to_string(first_line) + " and " +
                             std::to_string(second_line)),
      first_line_(first_line),
      second_line_(second_line) {}

std::vector<PostRecord> IngestPosts(std::span<const JsonLine> records) {
  std::vector<PostRecord> posts;
  posts.reserve(records.size());
  std::unordered_map<std::string, std::int64_t> seen;
  for (const auto& record : records) {
    PostRecord post = ParseRecord(record);
    auto [it, inserted] = seen.emplace(post.post_id, record.line);
    if (!inserted) {
      throw DuplicatePostError(post.post_id, it->second, record.line);
    }
    posts.push_back(std::move(post));
  }
  SortCanonical(posts);
  return posts;
}

}  // namespace persuasion::corpus
