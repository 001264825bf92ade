#include "persuasion/benchkit/scoring.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "persuasion/benchkit/metrics.h"
#include "persuasion/common/errors.h"
#include "persuasion/common/parallel.h"
#include "persuasion/common/stats.h"
#include "persuasion/corpus/text.h"

namespace persuasion::benchkit {
namespace {

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// First of `words` that occurs in `text` as a whole word, by position.
std::string FirstWord(const std::string& text, const std::vector<std::string>& words) {
  std::string lower = corpus::ToLowerAscii(text);
  std::size_t best_pos = std::string::npos;
  std::string best;
  for (const auto& w : words) {
    std::size_t pos = 0;
    while ((pos = lower.find(w, pos)) != std::string::npos) {
      bool left = pos == 0 || !IsAlnum(lower[pos - 1]);
      bool right = pos + w.size() >= lower.size() || !IsAlnum(lower[pos + w.size()]);
      if (left && right) break;
      ++pos;
    }
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best = w;
    }
  }
  return best;
}

// First character in [lo, hi] standing alone (no adjacent letters/digits).
std::string FirstStandalone(const std::string& text, char lo, char hi) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c < lo || c > hi) continue;
    bool left = i == 0 || !IsAlnum(text[i - 1]);
    bool right = i + 1 >= text.size() || !IsAlnum(text[i + 1]);
    if (left && right) return std::string(1, c);
  }
  return "";
}

bool IsBleu(Metric m) { return m == Metric::kBleu1 || m == Metric::kBleu2; }
bool IsRouge(Metric m) { return m == Metric::kRouge1 || m == Metric::kRougeL; }

}  // namespace

Submission SubmissionFromJson(const Json& j) {
  Submission s;
  s.player_id = j.value("player_id", std::string());
  s.task = j.value("task", std::string());
  s.created_at = j.value("created_at", std::string());
  if (!j.contains("generations") || !j["generations"].is_object()) {
    throw ParseError("submission lacks a 'generations' object", 0);
  }
  for (const auto& [id, text] : j["generations"].items()) {
    s.generations[id] = text.get<std::string>();
  }
  return s;
}

Json ToJson(const Submission& s) {
  return {{"player_id", s.player_id},
          {"task", s.task},
          {"generations", s.generations},
          {"created_at", s.created_at}};
}

Submission ReadSubmission(const std::filesystem::path& path) {
  std::string text = ReadTextFile(path);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos) {
    Json whole = Json::parse(text, nullptr, false);
    if (!whole.is_discarded() && whole.is_object() && whole.contains("generations")) {
      return SubmissionFromJson(whole);
    }
  }
  Submission s;
  for (const auto& line : ReadJsonLinesFile(path)) {
    const Json& j = line.value;
    if (!j.contains("instance_id") || !j.contains("generation")) {
      throw ParseError("submission line " + std::to_string(line.line) +
                           " needs instance_id and generation",
                       line.line);
    }
    std::string id = j["instance_id"].get<std::string>();
    if (!s.generations.emplace(id, j["generation"].get<std::string>()).second) {
      throw ParseError("submission line " + std::to_string(line.line) +
                           ": second generation for '" + id + "'",
                       line.line);
    }
    if (s.player_id.empty()) s.player_id = j.value("player_id", std::string());
  }
  return s;
}

std::vector<std::string> UnknownInstanceIds(const Submission& submission,
                                            const std::vector<TaskInstance>& instances) {
  std::set<std::string> known;
  for (const auto& t : instances) known.insert(t.instance_id);
  std::vector<std::string> out;
  for (const auto& [id, _] : submission.generations) {
    if (!known.count(id)) out.push_back(id);
  }
  return out;
}

std::string ToString(Metric metric) {
  switch (metric) {
    case Metric::kBleu1: return "bleu1";
    case Metric::kBleu2: return "bleu2";
    case Metric::kRouge1: return "rouge1";
    case Metric::kRougeL: return "rougeL";
    case Metric::kEmbedF: return "embed_f";
    case Metric::kAccuracy: return "accuracy";
  }
  return "bleu2";
}

Metric ParseMetric(const std::string& name) {
  std::string n = corpus::ToLowerAscii(name);
  if (n == "bleu1") return Metric::kBleu1;
  if (n == "bleu2") return Metric::kBleu2;
  if (n == "rouge1") return Metric::kRouge1;
  if (n == "rougel") return Metric::kRougeL;
  if (n == "embed_f" || n == "embedf") return Metric::kEmbedF;
  if (n == "accuracy") return Metric::kAccuracy;
  throw ConfigError("unknown metric '" + name + "'");
}

std::string NormalizePrediction(const std::string& task, const std::string& raw) {
  if (task == "TS-CT") {
    auto v = providers::ParseJudgeResponse(raw);
    if (v.winner == providers::Winner::kFirst) return "A";
    if (v.winner == providers::Winner::kSecond) return "B";
    return "";
  }
  if (task == "BS" || task.rfind("Blog-", 0) == 0) {
    return FirstWord(raw, {"low", "medium", "high"});
  }
  if (task == "HE-Vote") return FirstWord(raw, {"upvoted", "downvoted"});
  if (task == "HE-Reason") return FirstStandalone(raw, 'A', 'E');
  if (task == "HE-Opinion") return FirstStandalone(raw, '1', '7');
  auto b = raw.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = raw.find_last_not_of(" \t\r\n");
  return raw.substr(b, e - b + 1);
}

Json ToJson(const ScoreReport& r) {
  Json j = {{"task", r.task},
            {"metric", ToString(r.metric)},
            {"value", r.value},
            {"scored", r.scored},
            {"missing", r.missing}};
  j["unavailable"] = r.unavailable ? Json(*r.unavailable) : Json(nullptr);
  return j;
}

ScoreReport ScoreSubmission(const std::vector<TaskInstance>& instances,
                            const Submission& submission, Metric metric,
                            const std::string& task,
                            providers::ProviderClient* embedder, std::size_t workers) {
  auto unknown = UnknownInstanceIds(submission, instances);
  if (!unknown.empty()) {
    std::string ids;
    for (const auto& id : unknown) ids += (ids.empty() ? "" : ", ") + id;
    throw PreconditionError("submission names unknown instances: " + ids);
  }
  ScoreReport report;
  report.task = task.empty() ? submission.task : task;
  report.metric = metric;

  std::vector<const TaskInstance*> chosen;
  std::vector<const std::string*> outputs;
  for (const auto& t : instances) {
    if (!task.empty() && t.task != task && t.task.rfind(task + "-", 0) != 0) continue;
    auto it = submission.generations.find(t.instance_id);
    if (it == submission.generations.end()) {
      report.missing.push_back(t.instance_id);
      continue;
    }
    chosen.push_back(&t);
    outputs.push_back(&it->second);
  }
  if (metric == Metric::kEmbedF && !embedder) {
    report.unavailable = "no embedder configured";
    return report;
  }
  std::vector<double> values(chosen.size(), 0.0);
  try {
    ParallelFor(chosen.size(), workers, [&](std::size_t i) {
      const TaskInstance& t = *chosen[i];
      const std::string& out = *outputs[i];
      if (metric == Metric::kAccuracy) {
        if (!t.label) throw PreconditionError("instance '" + t.instance_id + "' has no label");
        values[i] = NormalizePrediction(t.task, out) == *t.label ? 1.0 : 0.0;
      } else if (t.references.empty()) {
        throw PreconditionError("instance '" + t.instance_id + "' has no references");
      } else if (IsBleu(metric)) {
        values[i] = Bleu(out, t.references, metric == Metric::kBleu1 ? 1 : 2);
      } else if (IsRouge(metric)) {
        values[i] = Rouge(out, t.references,
                          metric == Metric::kRouge1 ? RougeVariant::kUnigram
                                                    : RougeVariant::kLcs);
      } else {
        double best = 0.0;
        for (const auto& ref : t.references) {
          best = std::max(best, EmbedFScore(out, ref, *embedder));
        }
        values[i] = best;
      }
    });
  } catch (const CapabilityError& e) {
    report.unavailable = e.what();
    return report;
  }
  report.scored = static_cast<std::int64_t>(values.size());
  if (!values.empty()) {
    double mean = StableMean(values);
    report.value = IsBleu(metric) || IsRouge(metric) ? mean * 100.0 : mean;
  }
  return report;
}

Json ScoreHumanTransfer(const std::vector<TaskInstance>& instances,
                        providers::ProviderClient* generator,
                        providers::ProviderClient* scorer, std::size_t workers) {
  std::map<std::string, std::vector<const TaskInstance*>> by_task;
  for (const auto& t : instances) {
    if (t.task.rfind("HE-", 0) == 0) by_task[t.task].push_back(&t);
  }
  Json report = Json::object();

  auto classify = [&](const std::string& task) -> Json {
    const auto& items = by_task[task];
    if (items.empty()) return {{"n", 0}};
    if (!generator) return {{"n", items.size()}, {"unavailable", "no generator"}};
    std::vector<std::string> preds(items.size()), labels(items.size());
    ParallelFor(items.size(), workers, [&](std::size_t i) {
      preds[i] = NormalizePrediction(task, providers::Generate(items[i]->prompt, *generator));
      labels[i] = items[i]->label.value_or("");
    });
    if (task == "HE-Opinion") {
      std::vector<double> xs, ys;
      std::int64_t unparsed = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].empty()) {
          ++unparsed;
          continue;
        }
        xs.push_back(std::stod(preds[i]));
        ys.push_back(std::stod(labels[i]));
      }
      Json j = {{"n", items.size()}, {"unparsed", unparsed}};
      try {
        j["spearman"] = Spearman(xs, ys);
      } catch (const Error& e) {
        j["spearman"] = nullptr;
        j["note"] = e.what();
      }
      return j;
    }
    return {{"n", items.size()}, {"accuracy", Accuracy(preds, labels)}};
  };

  report["HE-Vote"] = classify("HE-Vote");
  report["HE-Reason"] = classify("HE-Reason");
  report["HE-Opinion"] = classify("HE-Opinion");

  const auto& feedback = by_task["HE-Feedback"];
  if (feedback.empty()) {
    report["HE-Feedback"] = {{"n", 0}};
  } else if (!scorer) {
    report["HE-Feedback"] = {{"n", feedback.size()}, {"unavailable", "no scorer"}};
  } else {
    std::vector<double> ll(feedback.size());
    try {
      ParallelFor(feedback.size(), workers, [&](std::size_t i) {
        ll[i] = providers::ScoreCompletion(feedback[i]->prompt,
                                           feedback[i]->references.front(), *scorer)
                    .MeanLogLikelihood();
      });
      report["HE-Feedback"] = {{"n", feedback.size()},
                               {"mean_log_likelihood", StableMean(ll)}};
    } catch (const CapabilityError& e) {
      report["HE-Feedback"] = {{"n", feedback.size()}, {"unavailable", e.what()}};
    }
  }
  return report;
}

}  // namespace persuasion::benchkit
