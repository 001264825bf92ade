#ifndef PERSUASION_PAIRMINER_MINER_H_
#define PERSUASION_PAIRMINER_MINER_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/pairminer/pairs.h"
#include "persuasion/providers/operations.h"

namespace persuasion::pairminer {

// Link key -> webpage excerpt (title, description, keywords), supplied by an
// ingestion side-file.
using ContextMap = std::map<std::string, std::string>;

inline constexpr int kContextWordLimit = 150;

ContextMap ReadContextMap(const std::filesystem::path& path);
std::string TruncateWords(const std::string& text, int max_words);

struct Candidate {
  std::size_t first;   // index of the lower-engagement post
  std::size_t second;  // index of the higher-engagement post
};

// Every unordered same-account pair whose timestamps lie within
// max_day_gap, each once, lower-engagement post first. Uses a sliding time
// window per account. `posts` need not be sorted.
void GenerateCandidates(const std::vector<corpus::PostRecord>& posts,
                        const GateThresholds& thresholds,
                        const std::function<void(const Candidate&)>& emit);
std::vector<Candidate> GenerateCandidates(
    const std::vector<corpus::PostRecord>& posts,
    const GateThresholds& thresholds);

// True when `a` should be the T1 (lower-engagement) side against `b`.
bool IsLowerEngagement(const corpus::PostRecord& a, const corpus::PostRecord& b,
                       const GateThresholds& thresholds);

struct GateEvidence {
  bool media_t1 = false;
  bool media_t2 = false;
  bool shared_link = false;
  double cosine = 0.0;
  std::optional<double> edit_sim;
  std::optional<double> media_sim;
};

// First matching rule in the fixed precedence order Hilight, VisOnly,
// TextOnly, AddImg, Ref, Parap, FFRef, FFPara. nullopt means untyped.
std::optional<PairType> AssignType(const GateEvidence& evidence,
                                   const GateThresholds& thresholds);

// Whether `evidence` clears every floor `gate` sets.
bool PassesTypeGate(const GateEvidence& evidence, const TypeGate& gate,
                    EditMetric edit_metric);

enum class GateStatus { kAccepted, kRejected, kDeferred };

struct GateOutcome {
  GateStatus status = GateStatus::kRejected;
  std::optional<TranssuasionPair> pair;
  // Rejection or deferral reason: "day_gap", "percentile_gap", "char_diff",
  // "untyped", "uncaptioned".
  std::string reason;
};

using EmbedFn = std::function<providers::EmbeddingVector(const std::string&)>;

// Gates one candidate; the pair's members may be given in either order.
GateOutcome GatePair(const corpus::PostRecord& a, const corpus::PostRecord& b,
                     const GateThresholds& thresholds,
                     providers::ProviderClient& embedder,
                     const ContextMap* contexts = nullptr);
GateOutcome GatePair(const corpus::PostRecord& a, const corpus::PostRecord& b,
                     const GateThresholds& thresholds, const EmbedFn& embed,
                     const ContextMap* contexts = nullptr);

// Greedy: keeps pairs in descending percentile_gap order (ties by
// (t1.post_id, t2.post_id) ascending) unless either post already sits in
// max_pairs_per_post kept pairs. Output is in that same order.
std::vector<TranssuasionPair> CapMultiplicity(std::vector<TranssuasionPair> pairs,
                                              int max_pairs_per_post);

// Sorts by (account, t1.created_at, t1.post_id, t2.created_at, t2.post_id).
void SortPairsCanonical(std::vector<TranssuasionPair>& pairs);

struct MineResult {
  std::vector<TranssuasionPair> pairs;
  std::map<std::string, std::int64_t> type_counts;
  std::map<std::string, std::int64_t> rejections;
  std::int64_t candidates = 0;
  // One entry per deferred or errored candidate, for a later retry pass.
  std::vector<Json> retry_queue;
};

struct MineOptions {
  const ContextMap* contexts = nullptr;
  std::size_t workers = 1;
};

// GenerateCandidates -> GatePair -> CapMultiplicity, output in canonical
// order and independent of input order.
MineResult MinePairs(std::vector<corpus::PostRecord> posts,
                     const GateThresholds& thresholds,
                     providers::ProviderClient& embedder,
                     const MineOptions& options = {});

Json MineSummaryJson(const MineResult& result);

}  // namespace persuasion::pairminer

#endif  // PERSUASION_PAIRMINER_MINER_H_
