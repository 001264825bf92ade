#include "persuasion/pairminer/miner.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "persuasion/common/errors.h"
#include "persuasion/common/parallel.h"
#include "persuasion/corpus/text.h"
#include "persuasion/simtext/similarity.h"

namespace persuasion::pairminer {
namespace {

using corpus::PostRecord;

double Percentile(const PostRecord& p) {
  if (!p.like_percentile) {
    throw PreconditionError("post '" + p.post_id + "' has no like_percentile");
  }
  return *p.like_percentile;
}

bool EdgePasses(double sim, double floor, EditMetric metric) {
  return metric == EditMetric::kSimilarity ? sim > floor : (1.0 - sim) > floor;
}

// Captions of all assets, in order; nullopt when any asset is uncaptioned.
std::optional<std::string> MediaText(const PostRecord& p) {
  std::string out;
  for (const auto& m : p.media) {
    if (!m.caption) return std::nullopt;
    if (!out.empty()) out += "; ";
    out += *m.caption;
  }
  return out;
}

std::optional<std::string> SharedLink(const PostRecord& a, const PostRecord& b) {
  std::vector<std::string> la = a.links, lb = b.links;
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  std::vector<std::string> shared;
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                        std::back_inserter(shared));
  if (shared.empty()) return std::nullopt;
  return shared.front();
}

}  // namespace

ContextMap ReadContextMap(const std::filesystem::path& path) {
  Json j = ReadJsonFile(path);
  ContextMap out;
  for (const auto& [key, value] : j.items()) {
    out[corpus::NormalizeLinkKey(key)] = value.get<std::string>();
  }
  return out;
}

std::string TruncateWords(const std::string& text, int max_words) {
  auto words = corpus::SplitWhitespace(text);
  std::string out;
  for (int i = 0; i < max_words && i < static_cast<int>(words.size()); ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

bool IsLowerEngagement(const PostRecord& a, const PostRecord& b,
                       const GateThresholds& thresholds) {
  if (thresholds.delta_metric == DeltaMetric::kPercentile) {
    double pa = Percentile(a), pb = Percentile(b);
    if (pa != pb) return pa < pb;
  } else if (a.like_count != b.like_count) {
    return a.like_count < b.like_count;
  }
  return std::tie(a.created_at, a.post_id) < std::tie(b.created_at, b.post_id);
}

void GenerateCandidates(const std::vector<PostRecord>& posts,
                        const GateThresholds& thresholds,
                        const std::function<void(const Candidate&)>& emit) {
  std::vector<std::size_t> order(posts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = posts[x];
    const auto& b = posts[y];
    return std::tie(a.account_id, a.created_at, a.post_id) <
           std::tie(b.account_id, b.created_at, b.post_id);
  });
  const auto window = std::chrono::seconds{
      static_cast<std::int64_t>(thresholds.max_day_gap * 86400.0)};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& a = posts[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& b = posts[order[j]];
      if (b.account_id != a.account_id || b.created_at - a.created_at > window) {
        break;
      }
      if (IsLowerEngagement(a, b, thresholds)) {
        emit({order[i], order[j]});
      } else {
        emit({order[j], order[i]});
      }
    }
  }
}

std::vector<Candidate> GenerateCandidates(const std::vector<PostRecord>& posts,
                                          const GateThresholds& thresholds) {
  std::vector<Candidate> out;
  GenerateCandidates(posts, thresholds,
                     [&](const Candidate& c) { out.push_back(c); });
  return out;
}

bool PassesTypeGate(const GateEvidence& e, const TypeGate& gate,
                    EditMetric edit_metric) {
  if (gate.cosine_min && !(e.cosine > *gate.cosine_min)) return false;
  if (gate.edit_min &&
      !(e.edit_sim && EdgePasses(*e.edit_sim, *gate.edit_min, edit_metric))) {
    return false;
  }
  if (gate.media_sim_min && !(e.media_sim && *e.media_sim > *gate.media_sim_min)) {
    return false;
  }
  return true;
}

std::optional<PairType> AssignType(const GateEvidence& e,
                                   const GateThresholds& thresholds) {
  const bool no_media = !e.media_t1 && !e.media_t2;
  const bool both_media = e.media_t1 && e.media_t2;
  const bool output_only = !e.media_t1 && e.media_t2;
  const bool any_media = e.media_t1 || e.media_t2;
  // Media precondition per type, in precedence order.
  const std::pair<PairType, bool> rules[] = {
      {PairType::kHilight, e.shared_link},
      {PairType::kVisOnly, both_media},
      {PairType::kTextOnly, e.media_t2},
      {PairType::kAddImg, output_only},
      {PairType::kRef, no_media},
      {PairType::kParap, no_media},
      {PairType::kFFRef, any_media},
      {PairType::kFFPara, any_media},
  };
  for (const auto& [type, media_ok] : rules) {
    if (!media_ok) continue;
    auto it = thresholds.per_type.find(type);
    if (it == thresholds.per_type.end()) continue;
    if (PassesTypeGate(e, it->second, thresholds.edit_metric)) return type;
  }
  return std::nullopt;
}

GateOutcome GatePair(const PostRecord& a, const PostRecord& b,
                     const GateThresholds& thresholds,
                     providers::ProviderClient& embedder,
                     const ContextMap* contexts) {
  return GatePair(
      a, b, thresholds,
      [&](const std::string& text) { return providers::EmbedText(text, embedder); },
      contexts);
}

GateOutcome GatePair(const PostRecord& a, const PostRecord& b,
                     const GateThresholds& thresholds, const EmbedFn& embed,
                     const ContextMap* contexts) {
  const bool a_first = IsLowerEngagement(a, b, thresholds);
  const PostRecord& t1 = a_first ? a : b;
  const PostRecord& t2 = a_first ? b : a;
  GateOutcome out;

  const double day_gap = DayGap(t1.created_at, t2.created_at);
  if (t1.account_id != t2.account_id || day_gap > thresholds.max_day_gap) {
    out.reason = "day_gap";
    return out;
  }
  double percentile_gap = 0.0;
  if (t1.like_percentile && t2.like_percentile) {
    percentile_gap = *t2.like_percentile - *t1.like_percentile;
  }
  if (thresholds.delta_metric == DeltaMetric::kPercentile) {
    percentile_gap = Percentile(t2) - Percentile(t1);
    if (percentile_gap < thresholds.delta_percentile_min) {
      out.reason = "percentile_gap";
      return out;
    }
  } else {
    double base = static_cast<double>(std::max<std::int64_t>(t1.like_count, 1));
    double lift = static_cast<double>(t2.like_count - t1.like_count) / base;
    if (lift < thresholds.delta_lift_min) {
      out.reason = "percentile_gap";
      return out;
    }
  }
  if (simtext::IndelDistance(t1.text, t2.text) <
      static_cast<std::size_t>(thresholds.min_char_diff)) {
    out.reason = "char_diff";
    return out;
  }
  std::optional<std::string> media1, media2;
  if (t1.has_media()) media1 = MediaText(t1);
  if (t2.has_media()) media2 = MediaText(t2);
  if ((t1.has_media() && !media1) || (t2.has_media() && !media2)) {
    out.status = GateStatus::kDeferred;
    out.reason = "uncaptioned";
    return out;
  }

  GateEvidence e;
  e.media_t1 = t1.has_media();
  e.media_t2 = t2.has_media();
  auto link = SharedLink(t1, t2);
  e.shared_link = link.has_value();
  e.cosine = simtext::CosineSimilarity(embed(t1.text), embed(t2.text)).value;
  e.edit_sim = simtext::EditSimilarity(t1.text, t2.text).value;
  if (media1 && media2) {
    e.media_sim = simtext::CosineSimilarity(embed(*media1), embed(*media2)).value;
  }
  auto type = AssignType(e, thresholds);
  if (!type) {
    out.reason = "untyped";
    return out;
  }

  TranssuasionPair pair;
  pair.t1 = t1;
  pair.t2 = t2;
  pair.pair_type = *type;
  pair.cosine = e.cosine;
  pair.edit_sim = e.edit_sim;
  pair.media_sim = e.media_sim;
  pair.shared_link = e.shared_link;
  pair.day_gap = day_gap;
  pair.percentile_gap = percentile_gap;
  if (*type == PairType::kHilight && contexts) {
    if (auto it = contexts->find(*link); it != contexts->end()) {
      pair.context = TruncateWords(it->second, kContextWordLimit);
    }
  }
  out.status = GateStatus::kAccepted;
  out.pair = std::move(pair);
  return out;
}

std::vector<TranssuasionPair> CapMultiplicity(std::vector<TranssuasionPair> pairs,
                                              int max_pairs_per_post) {
  std::sort(pairs.begin(), pairs.end(),
            [](const TranssuasionPair& x, const TranssuasionPair& y) {
              if (x.percentile_gap != y.percentile_gap) {
                return x.percentile_gap > y.percentile_gap;
              }
              return std::tie(x.t1.post_id, x.t2.post_id) <
                     std::tie(y.t1.post_id, y.t2.post_id);
            });
  std::unordered_map<std::string, int> uses;
  std::vector<TranssuasionPair> kept;
  for (auto& p : pairs) {
    int& u1 = uses[p.t1.post_id];
    int& u2 = uses[p.t2.post_id];
    if (u1 >= max_pairs_per_post || u2 >= max_pairs_per_post) continue;
    ++u1;
    ++u2;
    kept.push_back(std::move(p));
  }
  return kept;
}

void SortPairsCanonical(std::vector<TranssuasionPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const TranssuasionPair& x, const TranssuasionPair& y) {
              return std::tie(x.t1.account_id, x.t1.created_at, x.t1.post_id,
                              x.t2.created_at, x.t2.post_id) <
                     std::tie(y.t1.account_id, y.t1.created_at, y.t1.post_id,
                              y.t2.created_at, y.t2.post_id);
            });
}

MineResult MinePairs(std::vector<PostRecord> posts,
                     const GateThresholds& thresholds,
                     providers::ProviderClient& embedder,
                     const MineOptions& options) {
  thresholds.Validate();
  corpus::SortCanonical(posts);

  // Partition by account; posts are already grouped by the canonical sort.
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = 0; i < posts.size();) {
    std::size_t j = i;
    while (j < posts.size() && posts[j].account_id == posts[i].account_id) ++j;
    ranges.emplace_back(i, j);
    i = j;
  }

  struct Partial {
    std::vector<TranssuasionPair> pairs;
    std::map<std::string, std::int64_t> rejections;
    std::vector<Json> retry;
    std::int64_t candidates = 0;
  };
  std::vector<Partial> partials(ranges.size());

  ParallelFor(ranges.size(), options.workers, [&](std::size_t r) {
    auto [begin, end] = ranges[r];
    std::vector<PostRecord> local(posts.begin() + static_cast<std::ptrdiff_t>(begin),
                                  posts.begin() + static_cast<std::ptrdiff_t>(end));
    std::unordered_map<std::string, providers::EmbeddingVector> memo;
    EmbedFn embed = [&](const std::string& text) {
      auto it = memo.find(text);
      if (it != memo.end()) return it->second;
      auto v = providers::EmbedText(text, embedder);
      memo.emplace(text, v);
      return v;
    };
    Partial& part = partials[r];
    GenerateCandidates(local, thresholds, [&](const Candidate& c) {
      ++part.candidates;
      const auto& a = local[c.first];
      const auto& b = local[c.second];
      try {
        GateOutcome o = GatePair(a, b, thresholds, embed, options.contexts);
        if (o.status == GateStatus::kAccepted) {
          part.pairs.push_back(std::move(*o.pair));
        } else if (o.status == GateStatus::kDeferred) {
          ++part.rejections["deferred_" + o.reason];
          Json assets = Json::array();
          for (const auto* p : {&a, &b}) {
            for (const auto& m : p->media) {
              if (!m.caption) assets.push_back(m.asset_id);
            }
          }
          part.retry.push_back({{"t1", a.post_id},
                                {"t2", b.post_id},
                                {"reason", o.reason},
                                {"assets", assets}});
        } else {
          ++part.rejections[o.reason];
        }
      } catch (const TransportError& e) {
        ++part.rejections["error_transport"];
        part.retry.push_back({{"t1", a.post_id},
                              {"t2", b.post_id},
                              {"reason", "transport"},
                              {"message", e.what()}});
      }
    });
  });

  MineResult result;
  std::vector<TranssuasionPair> gated;
  for (auto& part : partials) {
    result.candidates += part.candidates;
    for (auto& [k, v] : part.rejections) result.rejections[k] += v;
    for (auto& j : part.retry) result.retry_queue.push_back(std::move(j));
    for (auto& p : part.pairs) gated.push_back(std::move(p));
  }
  std::int64_t before_cap = static_cast<std::int64_t>(gated.size());
  result.pairs = CapMultiplicity(std::move(gated), thresholds.max_pairs_per_post);
  result.rejections["multiplicity_cap"] =
      before_cap - static_cast<std::int64_t>(result.pairs.size());
  SortPairsCanonical(result.pairs);
  for (const auto& p : result.pairs) ++result.type_counts[ToString(p.pair_type)];
  return result;
}

Json MineSummaryJson(const MineResult& result) {
  return {{"candidates", result.candidates},
          {"pairs", result.pairs.size()},
          {"type_counts", result.type_counts},
          {"rejections", result.rejections},
          {"retry_queue", result.retry_queue.size()}};
}

}  // namespace persuasion::pairminer
