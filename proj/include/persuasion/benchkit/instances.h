#ifndef PERSUASION_BENCHKIT_INSTANCES_H_
#define PERSUASION_BENCHKIT_INSTANCES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/benchkit/templates.h"
#include "persuasion/common/jsonl.h"
#include "persuasion/common/timeutil.h"
#include "persuasion/corpus/records.h"
#include "persuasion/pairminer/miner.h"
#include "persuasion/transcreate/transcreate.h"

namespace persuasion::benchkit {

struct TaskInstance {
  std::string instance_id;
  // BS, CS-Key, CS-Web, CS-Img, TS-CT, TS-GT-<type>, TC, Blog-Views,
  // Blog-Dwell, HE-Vote, HE-Reason, HE-Feedback, HE-Opinion.
  std::string task;
  std::string prompt;
  std::vector<std::string> references;
  std::optional<std::string> label;
  std::string split;
  std::optional<std::string> order_variant;  // "ab" or "ba"
  // Source ids and anchor texts ("baseline", "topline") for the arena.
  Json meta = Json::object();

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

Json ToJson(const TaskInstance& instance);
TaskInstance InstanceFromJson(const Json& j);
std::vector<TaskInstance> ReadInstances(const std::filesystem::path& path);
void WriteInstances(const std::filesystem::path& path,
                    const std::vector<TaskInstance>& instances);

// Account id -> brand name shown in prompts. Unknown accounts show their id.
class BrandDirectory {
 public:
  BrandDirectory() = default;
  explicit BrandDirectory(const std::vector<corpus::AccountRecord>& accounts);

  std::string Company(const std::string& account_id) const;
  // Audience description for transcreation prompts: the bio when present.
  std::string Demographic(const std::string& account_id) const;

 private:
  std::map<std::string, std::string> company_;
  std::map<std::string, std::string> bio_;
};

struct SkippedItem {
  std::string item_id;
  std::string reason;
};

struct BuildResult {
  std::vector<TaskInstance> instances;
  std::vector<SkippedItem> skipped;
};

struct BuildContext {
  const TemplateRegistry* registry = nullptr;  // nullptr: default registry
  BrandDirectory brands;
  const pairminer::ContextMap* contexts = nullptr;
  std::string split = "none";

  const TemplateRegistry& templates() const;
};

// Captions of a post's media, quoted and joined; nullopt when any asset
// lacks a caption or the post has no media.
std::optional<std::string> VerbalizeMedia(const corpus::PostRecord& post);

// Two instances per pair: "ab" shows (t1, t2) with label "B", "ba" shows
// (t2, t1) with label "A".
BuildResult BuildCtInstances(const std::vector<pairminer::TranssuasionPair>& pairs,
                             const BuildContext& ctx);

// Label is the low/medium/high bin of like_percentile. PreconditionError for
// an unpercentiled post.
BuildResult BuildBsInstances(const std::vector<corpus::PostRecord>& posts,
                             const BuildContext& ctx);

enum class CsVariant { kKey, kWeb, kImg };
std::string ToString(CsVariant variant);
CsVariant ParseCsVariant(const std::string& name);

// Document frequencies for keyword salience.
class KeywordModel {
 public:
  static KeywordModel Build(const std::vector<corpus::PostRecord>& posts);
  // Top `n` content words of `text` by tf * idf, ties by first appearance.
  std::vector<std::string> Keywords(const std::string& text, std::size_t n = 5) const;

 private:
  std::map<std::string, std::int64_t> doc_freq_;
  std::int64_t docs_ = 0;
};

// References are [post text]; the prompt asks for the post's engagement bin.
// Posts lacking what the variant needs are skipped with a reason.
BuildResult BuildCsInstances(const std::vector<corpus::PostRecord>& posts,
                             CsVariant variant, const KeywordModel& keywords,
                             const BuildContext& ctx);

// Template id for a pair type, e.g. "gt_ref".
std::string GtTemplateId(pairminer::PairType type);

// Per-type prompts over t1. References are [t2 text], or [t2 media
// description] for VisOnly.
BuildResult BuildGtInstances(const std::vector<pairminer::TranssuasionPair>& pairs,
                             const BuildContext& ctx);

BuildResult BuildTcInstances(const std::vector<transcreate::TranscreationPair>& pairs,
                             const BuildContext& ctx);

struct BlogPost {
  std::string post_id;
  std::string author;
  std::string title;
  Date published;
  std::vector<std::string> tags;
  double reading_minutes = 0.0;
  double views = 0.0;
  double dwell_seconds = 0.0;
};

BlogPost BlogPostFromJson(const Json& j);
std::vector<BlogPost> ReadBlogPosts(const std::filesystem::path& path);

enum class BlogMetric { kViews, kDwell };

inline constexpr std::size_t kBlogIclExamples = 10;

// Labels bin each post's percentile on the chosen metric over the whole
// collection. Each prompt is preceded by up to kBlogIclExamples earlier posts
// of the same author with their labels; meta.icl_short marks fewer.
BuildResult BuildBlogInstances(const std::vector<BlogPost>& posts, BlogMetric metric,
                               const BuildContext& ctx);

struct HumanStudyRecord {
  std::string record_id;
  std::string kind;  // vote, reason, feedback, opinion
  std::string tweet;
  std::string vote;      // upvoted / downvoted
  std::string reason;    // option letter
  std::string feedback;
  std::string claim;
  int initial_rating = 0;
  std::string argument;
  int final_rating = 0;
};

HumanStudyRecord HumanRecordFromJson(const Json& j);
std::vector<HumanStudyRecord> ReadHumanStudy(const std::filesystem::path& path);

// Option letters offered for a reason question after an up or down vote.
const std::vector<std::string>& ReasonOptions(bool upvoted);

BuildResult BuildHeInstances(const std::vector<HumanStudyRecord>& records,
                             const BuildContext& ctx);

}  // namespace persuasion::benchkit

#endif  // PERSUASION_BENCHKIT_INSTANCES_H_
