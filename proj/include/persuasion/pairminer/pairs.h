#ifndef PERSUASION_PAIRMINER_PAIRS_H_
#define PERSUASION_PAIRMINER_PAIRS_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/common/jsonl.h"
#include "persuasion/corpus/records.h"

namespace persuasion::pairminer {

enum class PairType { kRef, kParap, kAddImg, kFFRef, kFFPara, kVisOnly, kTextOnly, kHilight };

inline constexpr std::array<PairType, 8> kAllPairTypes = {
    PairType::kRef,    PairType::kParap,   PairType::kAddImg,   PairType::kFFRef,
    PairType::kFFPara, PairType::kVisOnly, PairType::kTextOnly, PairType::kHilight};

// "Ref", "Parap", "AddImg", "FFRef", "FFPara", "VisOnly", "TextOnly", "Hilight".
std::string ToString(PairType type);
PairType ParsePairType(const std::string& name);

// Per-type similarity floors. Each set floor is a strict lower bound.
struct TypeGate {
  std::optional<double> cosine_min;
  std::optional<double> edit_min;
  std::optional<double> media_sim_min;
};

// How the edit threshold is read: on similarity (1 - normalized edits) or
// on the normalized edit distance itself.
enum class EditMetric { kSimilarity, kDistance };

// How "T2 beats T1" is measured: a gap in like percentile, or the relative
// lift in raw likes.
enum class DeltaMetric { kPercentile, kRelativeLift };

struct GateThresholds {
  double max_day_gap = 45.0;
  int min_char_diff = 5;
  int max_pairs_per_post = 20;
  double delta_percentile_min = 40.0;
  DeltaMetric delta_metric = DeltaMetric::kPercentile;
  double delta_lift_min = 1.0;
  EditMetric edit_metric = EditMetric::kSimilarity;
  std::map<PairType, TypeGate> per_type = DefaultTypeGates();

  static std::map<PairType, TypeGate> DefaultTypeGates();

  // ConfigError when an invariant fails.
  void Validate() const;
};

GateThresholds ThresholdsFromJson(const Json& j);
Json ToJson(const GateThresholds& t);

struct TranssuasionPair {
  corpus::PostRecord t1;  // lower engagement
  corpus::PostRecord t2;  // higher engagement
  PairType pair_type = PairType::kRef;
  double cosine = 0.0;
  std::optional<double> edit_sim;
  std::optional<double> media_sim;
  bool shared_link = false;
  double day_gap = 0.0;
  double percentile_gap = 0.0;
  std::optional<std::string> context;

  std::string pair_id() const { return t1.post_id + "|" + t2.post_id; }
};

Json ToJson(const TranssuasionPair& pair);
TranssuasionPair PairFromJson(const Json& j);

std::vector<TranssuasionPair> ReadPairs(const std::filesystem::path& path);
void WritePairs(const std::filesystem::path& path,
                const std::vector<TranssuasionPair>& pairs);

}  // namespace persuasion::pairminer

#endif  // PERSUASION_PAIRMINER_PAIRS_H_
