#include "persuasion/benchkit/instances.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "persuasion/common/errors.h"
#include "persuasion/corpus/percentiles.h"
#include "persuasion/corpus/stopwords.h"
#include "persuasion/corpus/text.h"

namespace persuasion::benchkit {
namespace {

using corpus::PostRecord;
using pairminer::PairType;
using pairminer::TranssuasionPair;

std::string PromptDate(Timestamp ts) { return FormatPromptTimestamp(ts); }

std::string Bin(const PostRecord& p) {
  if (!p.like_percentile) {
    throw PreconditionError("post '" + p.post_id + "' has no like_percentile");
  }
  return corpus::ToString(corpus::BinPercentile(*p.like_percentile));
}

std::optional<std::string> LinkContext(const PostRecord& p,
                                       const pairminer::ContextMap* contexts) {
  if (!contexts) return std::nullopt;
  for (const auto& link : p.links) {
    auto it = contexts->find(link);
    if (it != contexts->end()) {
      return pairminer::TruncateWords(it->second, pairminer::kContextWordLimit);
    }
  }
  return std::nullopt;
}

std::string JoinStrings(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string FormatMinutes(double minutes) {
  double rounded = std::round(minutes);
  if (std::fabs(rounded - minutes) < 1e-9) {
    return std::to_string(static_cast<long long>(rounded)) + " min";
  }
  Json j = minutes;
  return j.dump() + " min";
}

}  // namespace

Json ToJson(const TaskInstance& t) {
  Json j = {{"instance_id", t.instance_id},
            {"task", t.task},
            {"prompt", t.prompt},
            {"references", t.references},
            {"split", t.split},
            {"meta", t.meta}};
  j["label"] = t.label ? Json(*t.label) : Json(nullptr);
  j["order_variant"] = t.order_variant ? Json(*t.order_variant) : Json(nullptr);
  return j;
}

TaskInstance InstanceFromJson(const Json& j) {
  TaskInstance t;
  t.instance_id = j.at("instance_id").get<std::string>();
  t.task = j.at("task").get<std::string>();
  t.prompt = j.at("prompt").get<std::string>();
  t.references = j.value("references", std::vector<std::string>{});
  if (j.contains("label") && j["label"].is_string()) t.label = j["label"].get<std::string>();
  t.split = j.value("split", std::string("none"));
  if (j.contains("order_variant") && j["order_variant"].is_string()) {
    t.order_variant = j["order_variant"].get<std::string>();
  }
  t.meta = j.value("meta", Json::object());
  return t;
}

std::vector<TaskInstance> ReadInstances(const std::filesystem::path& path) {
  std::vector<TaskInstance> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(InstanceFromJson(line.value));
    } catch (const Json::exception& e) {
      throw ParseError("instance at line " + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    }
  }
  return out;
}

void WriteInstances(const std::filesystem::path& path,
                    const std::vector<TaskInstance>& instances) {
  std::vector<Json> lines;
  lines.reserve(instances.size());
  for (const auto& t : instances) lines.push_back(ToJson(t));
  WriteJsonLinesFile(path, lines);
}

BrandDirectory::BrandDirectory(const std::vector<corpus::AccountRecord>& accounts) {
  for (const auto& a : accounts) {
    if (!a.display_name.empty()) company_[a.account_id] = a.display_name;
    if (!a.bio.empty()) bio_[a.account_id] = a.bio;
  }
}

std::string BrandDirectory::Company(const std::string& account_id) const {
  auto it = company_.find(account_id);
  return it == company_.end() ? account_id : it->second;
}

std::string BrandDirectory::Demographic(const std::string& account_id) const {
  auto it = bio_.find(account_id);
  return it == bio_.end() ? "the followers of " + account_id : it->second;
}

const TemplateRegistry& BuildContext::templates() const {
  return registry ? *registry : TemplateRegistry::Default();
}

std::optional<std::string> VerbalizeMedia(const PostRecord& post) {
  if (post.media.empty()) return std::nullopt;
  std::vector<std::string> parts;
  for (const auto& m : post.media) {
    if (!m.caption) return std::nullopt;
    parts.push_back("\"" + *m.caption + "\"");
  }
  return JoinStrings(parts, ", ");
}

BuildResult BuildCtInstances(const std::vector<TranssuasionPair>& pairs,
                             const BuildContext& ctx) {
  const auto& tmpl = ctx.templates().Get("ct");
  BuildResult out;
  for (const auto& p : pairs) {
    for (bool ab : {true, false}) {
      const PostRecord& first = ab ? p.t1 : p.t2;
      const PostRecord& second = ab ? p.t2 : p.t1;
      TaskInstance t;
      t.instance_id = "ct:" + p.t1.post_id + ":" + p.t2.post_id + (ab ? ":ab" : ":ba");
      t.task = "TS-CT";
      t.prompt = tmpl.Render({{"username", p.t1.account_id},
                              {"company", ctx.brands.Company(p.t1.account_id)},
                              {"Tweet1", first.text},
                              {"Date1", PromptDate(first.created_at)},
                              {"Tweet2", second.text},
                              {"Date2", PromptDate(second.created_at)}});
      t.label = ab ? "B" : "A";
      t.split = ctx.split;
      t.order_variant = ab ? "ab" : "ba";
      t.meta = {{"pair_id", p.pair_id()},
                {"account", p.t1.account_id},
                {"posts", {p.t1.post_id, p.t2.post_id}},
                {"pair_type", pairminer::ToString(p.pair_type)}};
      out.instances.push_back(std::move(t));
    }
  }
  return out;
}

BuildResult BuildBsInstances(const std::vector<PostRecord>& posts,
                             const BuildContext& ctx) {
  const auto& with_media = ctx.templates().Get("bs");
  const auto& text_only = ctx.templates().Get("bs_text");
  BuildResult out;
  for (const auto& p : posts) {
    TaskInstance t;
    t.instance_id = "bs:" + p.post_id;
    t.task = "BS";
    TemplateVars vars = {{"Brand", ctx.brands.Company(p.account_id)},
                         {"Username", p.account_id},
                         {"Date", PromptDate(p.created_at)},
                         {"Tweet", p.text}};
    auto media = VerbalizeMedia(p);
    if (media) {
      vars["Media_content_description"] = *media;
      t.prompt = with_media.Render(vars);
    } else {
      t.prompt = text_only.Render(vars);
    }
    t.label = Bin(p);
    t.references = {*t.label};
    t.split = ctx.split;
    t.meta = {{"account", p.account_id},
              {"posts", {p.post_id}},
              {"like_percentile", *p.like_percentile},
              {"media_described", media.has_value()}};
    out.instances.push_back(std::move(t));
  }
  return out;
}

std::string ToString(CsVariant variant) {
  switch (variant) {
    case CsVariant::kKey: return "Key";
    case CsVariant::kWeb: return "Web";
    case CsVariant::kImg: return "Img";
  }
  return "Key";
}

CsVariant ParseCsVariant(const std::string& name) {
  std::string n = corpus::ToLowerAscii(name);
  if (n == "key") return CsVariant::kKey;
  if (n == "web") return CsVariant::kWeb;
  if (n == "img") return CsVariant::kImg;
  throw ConfigError("unknown content-simulation variant '" + name + "'");
}

KeywordModel KeywordModel::Build(const std::vector<PostRecord>& posts) {
  KeywordModel m;
  for (const auto& p : posts) {
    auto words = corpus::ContentWords(p.text);
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    for (const auto& w : words) ++m.doc_freq_[w];
    ++m.docs_;
  }
  return m;
}

std::vector<std::string> KeywordModel::Keywords(const std::string& text,
                                                std::size_t n) const {
  auto words = corpus::ContentWords(text);
  std::vector<std::string> order;
  std::map<std::string, int> tf;
  for (const auto& w : words) {
    if (tf[w]++ == 0) order.push_back(w);
  }
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto it = doc_freq_.find(order[i]);
    double df = it == doc_freq_.end() ? 0.0 : static_cast<double>(it->second);
    double idf = std::log((1.0 + static_cast<double>(docs_)) / (1.0 + df)) + 1.0;
    scored.emplace_back(tf[order[i]] * idf, i);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < n; ++i) {
    out.push_back(order[scored[i].second]);
  }
  return out;
}

BuildResult BuildCsInstances(const std::vector<PostRecord>& posts, CsVariant variant,
                             const KeywordModel& keywords, const BuildContext& ctx) {
  const std::string tid = variant == CsVariant::kKey   ? "cs_key"
                          : variant == CsVariant::kWeb ? "cs_web"
                                                       : "cs_img";
  const auto& tmpl = ctx.templates().Get(tid);
  BuildResult out;
  for (const auto& p : posts) {
    TemplateVars vars = {{"company", ctx.brands.Company(p.account_id)},
                         {"username", p.account_id},
                         {"date", PromptDate(p.created_at)},
                         {"engagement", Bin(p)}};
    Json meta = {{"account", p.account_id}, {"posts", {p.post_id}}};
    if (variant == CsVariant::kKey) {
      auto kw = keywords.Keywords(p.text);
      if (kw.empty()) {
        out.skipped.push_back({p.post_id, "no_keywords"});
        continue;
      }
      vars["keywords"] = JoinStrings(kw, ", ");
      meta["keywords"] = kw;
    } else if (variant == CsVariant::kWeb) {
      auto context = LinkContext(p, ctx.contexts);
      if (!context) {
        out.skipped.push_back({p.post_id, "missing_context"});
        continue;
      }
      vars["webpage description"] = *context;
    } else {
      auto media = VerbalizeMedia(p);
      if (!media) {
        out.skipped.push_back({p.post_id, p.media.empty() ? "no_media" : "uncaptioned"});
        continue;
      }
      vars["image_description"] = *media;
    }
    TaskInstance t;
    t.instance_id = "cs-" + corpus::ToLowerAscii(ToString(variant)) + ":" + p.post_id;
    t.task = "CS-" + ToString(variant);
    t.prompt = tmpl.Render(vars);
    t.references = {p.text};
    t.split = ctx.split;
    t.meta = std::move(meta);
    out.instances.push_back(std::move(t));
  }
  return out;
}

std::string GtTemplateId(PairType type) {
  switch (type) {
    case PairType::kRef: return "gt_ref";
    case PairType::kParap: return "gt_parap";
    case PairType::kAddImg: return "gt_addimg";
    case PairType::kFFRef: return "gt_ffref";
    case PairType::kFFPara: return "gt_ffpara";
    case PairType::kVisOnly: return "gt_visonly";
    case PairType::kTextOnly: return "gt_textonly";
    case PairType::kHilight: return "gt_hilight";
  }
  throw RegistryError("no template for pair type");
}

BuildResult BuildGtInstances(const std::vector<TranssuasionPair>& pairs,
                             const BuildContext& ctx) {
  BuildResult out;
  for (const auto& p : pairs) {
    const auto& tmpl = ctx.templates().Get(GtTemplateId(p.pair_type));
    TemplateVars vars = {{"username", p.t1.account_id},
                         {"company", ctx.brands.Company(p.t1.account_id)},
                         {"tweet_x", p.t1.text},
                         {"date", PromptDate(p.t2.created_at)}};
    auto media1 = VerbalizeMedia(p.t1);
    auto media2 = VerbalizeMedia(p.t2);
    if ((p.t1.has_media() && !media1) || (p.t2.has_media() && !media2)) {
      out.skipped.push_back({p.pair_id(), "uncaptioned"});
      continue;
    }
    vars["verb"] = media1 ? " with media: " + *media1 : "";
    std::string reference = p.t2.text;
    std::string baseline = p.t1.text;
    switch (p.pair_type) {
      case PairType::kTextOnly:
        vars["verb2"] = media2.value_or("");
        break;
      case PairType::kVisOnly:
        vars["tweet_y"] = p.t2.text;
        reference = media2.value_or("");
        baseline = media1.value_or("");
        break;
      case PairType::kHilight: {
        auto context = p.context ? p.context : LinkContext(p.t1, ctx.contexts);
        if (!context) {
          out.skipped.push_back({p.pair_id(), "missing_context"});
          continue;
        }
        vars["webpage"] = *context;
        break;
      }
      default:
        break;
    }
    for (const auto& name : tmpl.required) {
      if (!vars.count(name)) {
        throw RegistryError("template '" + tmpl.template_id + "' expects {" + name +
                            "} which pair type " + pairminer::ToString(p.pair_type) +
                            " does not supply");
      }
    }
    TaskInstance t;
    t.instance_id = "gt:" + pairminer::ToString(p.pair_type) + ":" + p.t1.post_id + ":" +
                    p.t2.post_id;
    t.task = "TS-GT-" + pairminer::ToString(p.pair_type);
    t.prompt = tmpl.Render(vars);
    t.references = {reference};
    t.split = ctx.split;
    t.meta = {{"pair_id", p.pair_id()},
              {"account", p.t1.account_id},
              {"posts", {p.t1.post_id, p.t2.post_id}},
              {"pair_type", pairminer::ToString(p.pair_type)},
              {"baseline", baseline},
              {"topline", reference}};
    out.instances.push_back(std::move(t));
  }
  return out;
}

BuildResult BuildTcInstances(const std::vector<transcreate::TranscreationPair>& pairs,
                             const BuildContext& ctx) {
  const auto& tmpl = ctx.templates().Get("tc");
  BuildResult out;
  for (const auto& p : pairs) {
    TaskInstance t;
    t.instance_id = "tc:" + p.t1.post_id + ":" + p.t2.post_id;
    t.task = "TC";
    t.prompt = tmpl.Render({{"username1", p.u1},
                            {"demographic1", ctx.brands.Demographic(p.u1)},
                            {"username2", p.u2},
                            {"demographic2", ctx.brands.Demographic(p.u2)},
                            {"company", ctx.brands.Company(p.u1)},
                            {"tweet_x", p.t1.text},
                            {"date", PromptDate(p.t2.created_at)}});
    t.references = {p.t2.text};
    t.split = ctx.split;
    t.meta = {{"pair_id", p.pair_id()},
              {"u1", p.u1},
              {"u2", p.u2},
              {"company_group", p.company_group},
              {"posts", {p.t1.post_id, p.t2.post_id}},
              {"baseline", p.t1.text},
              {"topline", p.t2.text}};
    out.instances.push_back(std::move(t));
  }
  return out;
}

BlogPost BlogPostFromJson(const Json& j) {
  BlogPost b;
  b.post_id = j.at("post_id").get<std::string>();
  b.author = j.at("author").get<std::string>();
  b.title = j.at("title").get<std::string>();
  auto date = ParseDate(j.at("published").get<std::string>().substr(0, 10));
  if (!date) throw ParseError("blog post '" + b.post_id + "': bad published date", 0);
  b.published = *date;
  b.tags = j.value("tags", std::vector<std::string>{});
  b.reading_minutes = j.value("reading_minutes", 0.0);
  b.views = j.at("views").get<double>();
  b.dwell_seconds = j.at("dwell_seconds").get<double>();
  return b;
}

std::vector<BlogPost> ReadBlogPosts(const std::filesystem::path& path) {
  std::vector<BlogPost> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(BlogPostFromJson(line.value));
    } catch (const Json::exception& e) {
      throw ParseError("blog post at line " + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    }
  }
  return out;
}

BuildResult BuildBlogInstances(const std::vector<BlogPost>& posts, BlogMetric metric,
                               const BuildContext& ctx) {
  const bool views = metric == BlogMetric::kViews;
  const auto& tmpl = ctx.templates().Get(views ? "blog_views" : "blog_dwell");
  std::vector<double> values;
  for (const auto& b : posts) values.push_back(views ? b.views : b.dwell_seconds);
  auto pct = corpus::MidrankPercentiles(values);
  std::vector<std::string> labels;
  for (double p : pct) labels.push_back(corpus::ToString(corpus::BinPercentile(p)));

  std::map<std::string, std::vector<std::size_t>> by_author;
  for (std::size_t i = 0; i < posts.size(); ++i) by_author[posts[i].author].push_back(i);
  for (auto& [a, idx] : by_author) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return std::tie(posts[x].published, posts[x].post_id) <
             std::tie(posts[y].published, posts[y].post_id);
    });
  }

  std::vector<std::size_t> order(posts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return posts[x].post_id < posts[y].post_id;
  });

  auto metadata = [&](const BlogPost& b) {
    TemplateVars v = {{"title", b.title},
                      {"author", b.author},
                      {"date of publication", FormatDate(b.published)},
                      {"tags", JoinStrings(b.tags, ", ")}};
    if (!views) v["estimated reading time"] = FormatMinutes(b.reading_minutes);
    return v;
  };

  BuildResult out;
  const std::string group_word = views ? "Views Group" : "Dwell Time Group";
  for (std::size_t i : order) {
    const BlogPost& b = posts[i];
    const auto& mine = by_author[b.author];
    std::vector<std::size_t> prior;
    for (std::size_t k : mine) {
      if (std::tie(posts[k].published, posts[k].post_id) <
          std::tie(b.published, b.post_id)) {
        prior.push_back(k);
      }
    }
    if (prior.size() > kBlogIclExamples) {
      prior.erase(prior.begin(), prior.end() - static_cast<std::ptrdiff_t>(kBlogIclExamples));
    }
    std::string icl;
    if (!prior.empty()) {
      icl = "Earlier posts by this author:\n";
      for (std::size_t k : prior) {
        icl += "Title: " + posts[k].title + " | Date of Publication: " +
               FormatDate(posts[k].published) + " | " + group_word + ": " + labels[k] +
               "\n";
      }
      icl += "\n";
    }
    TaskInstance t;
    t.instance_id = std::string(views ? "blog-views:" : "blog-dwell:") + b.post_id;
    t.task = views ? "Blog-Views" : "Blog-Dwell";
    t.prompt = icl + tmpl.Render(metadata(b));
    t.label = labels[i];
    t.references = {labels[i]};
    t.split = ctx.split;
    t.meta = {{"author", b.author},
              {"posts", {b.post_id}},
              {"percentile", pct[i]},
              {"icl_count", prior.size()},
              {"icl_short", prior.size() < kBlogIclExamples}};
    out.instances.push_back(std::move(t));
  }
  return out;
}

const std::vector<std::string>& ReasonOptions(bool upvoted) {
  static const std::vector<std::string> up = {
      "Prompt accurately interpreted", "High quality", "Great for inspiration",
      "Production ready", "Exceeds expectation"};
  static const std::vector<std::string> down = {"Poor quality", "Irrelevant results",
                                                "Unexpected content"};
  return upvoted ? up : down;
}

HumanStudyRecord HumanRecordFromJson(const Json& j) {
  HumanStudyRecord r;
  r.record_id = j.at("id").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.tweet = j.value("tweet", std::string());
  r.vote = corpus::ToLowerAscii(j.value("vote", std::string()));
  r.reason = j.value("reason", std::string());
  r.feedback = j.value("feedback", std::string());
  r.claim = j.value("claim", std::string());
  r.initial_rating = j.value("initial_rating", 0);
  r.argument = j.value("argument", std::string());
  r.final_rating = j.value("final_rating", 0);
  return r;
}

std::vector<HumanStudyRecord> ReadHumanStudy(const std::filesystem::path& path) {
  std::vector<HumanStudyRecord> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(HumanRecordFromJson(line.value));
    } catch (const Json::exception& e) {
      throw ParseError("study record at line " + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    }
  }
  return out;
}

BuildResult BuildHeInstances(const std::vector<HumanStudyRecord>& records,
                             const BuildContext& ctx) {
  const auto& reg = ctx.templates();
  BuildResult out;
  for (const auto& r : records) {
    TaskInstance t;
    t.split = ctx.split;
    t.meta = {{"record", r.record_id}};
    if (r.kind == "vote") {
      if (r.vote != "upvoted" && r.vote != "downvoted") {
        out.skipped.push_back({r.record_id, "bad_vote"});
        continue;
      }
      t.task = "HE-Vote";
      t.prompt = reg.Render("he_vote", {{"tweet", r.tweet}});
      t.label = r.vote;
    } else if (r.kind == "reason") {
      bool up = r.vote == "upvoted";
      if (!up && r.vote != "downvoted") {
        out.skipped.push_back({r.record_id, "bad_vote"});
        continue;
      }
      const auto& options = ReasonOptions(up);
      std::string letter;
      for (std::size_t i = 0; i < options.size(); ++i) {
        std::string l(1, static_cast<char>('A' + i));
        if (r.reason == l || r.reason == options[i]) letter = l;
      }
      if (letter.empty()) {
        out.skipped.push_back({r.record_id, "unknown_reason"});
        continue;
      }
      t.task = "HE-Reason";
      t.prompt = reg.Render(up ? "he_reason_up" : "he_reason_down", {{"tweet", r.tweet}});
      t.label = letter;
      t.meta["options"] = options.size();
    } else if (r.kind == "feedback") {
      if (r.feedback.empty()) {
        out.skipped.push_back({r.record_id, "empty_feedback"});
        continue;
      }
      t.task = "HE-Feedback";
      t.prompt = reg.Render("he_feedback", {{"tweet", r.tweet}});
      t.references = {r.feedback};
    } else if (r.kind == "opinion") {
      if (r.final_rating < 1 || r.final_rating > 7) {
        out.skipped.push_back({r.record_id, "rating_out_of_range"});
        continue;
      }
      t.task = "HE-Opinion";
      t.prompt = reg.Render("he_opinion", {{"claim", r.claim},
                                           {"initial_rating", std::to_string(r.initial_rating)},
                                           {"argument", r.argument}});
      t.label = std::to_string(r.final_rating);
    } else {
      out.skipped.push_back({r.record_id, "unknown_kind"});
      continue;
    }
    if (t.label) t.references = {*t.label};
    std::string prefix = corpus::ToLowerAscii(t.task);
    t.instance_id = prefix + ":" + r.record_id;
    out.instances.push_back(std::move(t));
  }
  return out;
}

}  // namespace persuasion::benchkit
