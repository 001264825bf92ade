#include "persuasion/pairminer/pairs.h"

#include "persuasion/common/errors.h"

namespace persuasion::pairminer {
namespace {

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> ReadOptional(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

std::string ToString(PairType type) {
  switch (type) {
    case PairType::kRef:
      return "Ref";
    case PairType::kParap:
      return "Parap";
    case PairType::kAddImg:
      return "AddImg";
    case PairType::kFFRef:
      return "FFRef";
    case PairType::kFFPara:
      return "FFPara";
    case PairType::kVisOnly:
      return "VisOnly";
    case PairType::kTextOnly:
      return "TextOnly";
    case PairType::kHilight:
      return "Hilight";
  }
  return "Ref";
}

PairType ParsePairType(const std::string& name) {
  for (PairType t : kAllPairTypes) {
    if (ToString(t) == name) return t;
  }
  throw ParseError("unknown pair type '" + name + "'", 0);
}

std::map<PairType, TypeGate> GateThresholds::DefaultTypeGates() {
  return {
      {PairType::kRef, {0.8, std::nullopt, std::nullopt}},
      {PairType::kParap, {0.6, 0.6, std::nullopt}},
      {PairType::kAddImg, {0.6, 0.6, std::nullopt}},
      {PairType::kFFRef, {0.8, std::nullopt, std::nullopt}},
      {PairType::kFFPara, {0.6, 0.6, std::nullopt}},
      {PairType::kVisOnly, {std::nullopt, std::nullopt, 0.7}},
      {PairType::kTextOnly, {0.8, std::nullopt, std::nullopt}},
      {PairType::kHilight, {0.6, 0.6, std::nullopt}},
  };
}

void GateThresholds::Validate() const {
  if (!(max_day_gap > 0.0)) throw ConfigError("max_day_gap must be > 0");
  if (min_char_diff < 0) throw ConfigError("min_char_diff must be >= 0");
  if (max_pairs_per_post < 1) throw ConfigError("max_pairs_per_post must be >= 1");
  if (!(delta_percentile_min >= 0.0 && delta_percentile_min <= 100.0)) {
    throw ConfigError("delta_percentile_min must lie in [0, 100]");
  }
  for (const auto& [type, gate] : per_type) {
    for (const auto& v : {gate.cosine_min, gate.edit_min, gate.media_sim_min}) {
      if (v && !(*v >= 0.0 && *v <= 1.0)) {
        throw ConfigError("similarity threshold for " + ToString(type) +
                          " outside [0, 1]");
      }
    }
  }
}

GateThresholds ThresholdsFromJson(const Json& j) {
  GateThresholds t;
  try {
    t.max_day_gap = j.value("max_day_gap", t.max_day_gap);
    t.min_char_diff = j.value("min_char_diff", t.min_char_diff);
    t.max_pairs_per_post = j.value("max_pairs_per_post", t.max_pairs_per_post);
    t.delta_percentile_min = j.value("delta_percentile_min", t.delta_percentile_min);
    t.delta_lift_min = j.value("delta_lift_min", t.delta_lift_min);
    std::string delta = j.value("delta_metric", std::string("percentile"));
    if (delta == "percentile") {
      t.delta_metric = DeltaMetric::kPercentile;
    } else if (delta == "relative_lift") {
      t.delta_metric = DeltaMetric::kRelativeLift;
    } else {
      throw ConfigError("unknown delta_metric '" + delta + "'");
    }
    std::string edit = j.value("edit_metric", std::string("similarity"));
    if (edit == "similarity") {
      t.edit_metric = EditMetric::kSimilarity;
    } else if (edit == "distance") {
      t.edit_metric = EditMetric::kDistance;
    } else {
      throw ConfigError("unknown edit_metric '" + edit + "'");
    }
    if (auto it = j.find("per_type"); it != j.end()) {
      for (const auto& [name, gate] : it->items()) {
        TypeGate g;
        g.cosine_min = ReadOptional(gate, "cosine_min");
        g.edit_min = ReadOptional(gate, "edit_min");
        g.media_sim_min = ReadOptional(gate, "media_sim_min");
        t.per_type[ParsePairType(name)] = g;
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad thresholds: ") + e.what());
  }
  t.Validate();
  return t;
}

Json ToJson(const GateThresholds& t) {
  Json per_type = Json::object();
  for (const auto& [type, gate] : t.per_type) {
    per_type[ToString(type)] = {{"cosine_min", OptionalNumber(gate.cosine_min)},
                                {"edit_min", OptionalNumber(gate.edit_min)},
                                {"media_sim_min", OptionalNumber(gate.media_sim_min)}};
  }
  return {{"max_day_gap", t.max_day_gap},
          {"min_char_diff", t.min_char_diff},
          {"max_pairs_per_post", t.max_pairs_per_post},
          {"delta_percentile_min", t.delta_percentile_min},
          {"delta_metric",
           t.delta_metric == DeltaMetric::kPercentile ? "percentile" : "relative_lift"},
          {"delta_lift_min", t.delta_lift_min},
          {"edit_metric",
           t.edit_metric == EditMetric::kSimilarity ? "similarity" : "distance"},
          {"per_type", per_type}};
}

Json ToJson(const TranssuasionPair& pair) {
  return {{"pair_id", pair.pair_id()},
          {"pair_type", ToString(pair.pair_type)},
          {"t1", corpus::ToJson(pair.t1)},
          {"t2", corpus::ToJson(pair.t2)},
          {"cosine", pair.cosine},
          {"edit_sim", OptionalNumber(pair.edit_sim)},
          {"media_sim", OptionalNumber(pair.media_sim)},
          {"shared_link", pair.shared_link},
          {"day_gap", pair.day_gap},
          {"percentile_gap", pair.percentile_gap},
          {"context", pair.context ? Json(*pair.context) : Json(nullptr)}};
}

TranssuasionPair PairFromJson(const Json& j) {
  TranssuasionPair p;
  p.t1 = corpus::PostFromJson(j.at("t1"));
  p.t2 = corpus::PostFromJson(j.at("t2"));
  p.pair_type = ParsePairType(j.at("pair_type").get<std::string>());
  p.cosine = j.at("cosine").get<double>();
  p.edit_sim = ReadOptional(j, "edit_sim");
  p.media_sim = ReadOptional(j, "media_sim");
  p.shared_link = j.value("shared_link", false);
  p.day_gap = j.at("day_gap").get<double>();
  p.percentile_gap = j.at("percentile_gap").get<double>();
  if (auto it = j.find("context"); it != j.end() && !it->is_null()) {
    p.context = it->get<std::string>();
  }
  return p;
}

std::vector<TranssuasionPair> ReadPairs(const std::filesystem::path& path) {
  std::vector<TranssuasionPair> out;
  for (const auto& line : ReadJsonLinesFile(path)) {
    try {
      out.push_back(PairFromJson(line.value));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line.line) + ": " +
                           e.what(),
                       line.line);
    }
  }
  return out;
}

void WritePairs(const std::filesystem::path& path,
                const std::vector<TranssuasionPair>& pairs) {
  std::vector<Json> lines;
  lines.reserve(pairs.size());
  for (const auto& p : pairs) lines.push_back(ToJson(p));
  WriteJsonLinesFile(path, lines);
}

}  // namespace persuasion::pairminer
