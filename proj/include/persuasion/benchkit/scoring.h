#ifndef PERSUASION_BENCHKIT_SCORING_H_
#define PERSUASION_BENCHKIT_SCORING_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/benchkit/instances.h"
#include "persuasion/common/jsonl.h"

namespace persuasion::benchkit {

struct Submission {
  std::string player_id;
  std::string task;
  std::map<std::string, std::string> generations;  // instance_id -> text
  std::string created_at;
};

// Accepts a JSON bundle {player_id, task, generations: {id: text}} or
// newline-delimited {instance_id, generation} records. ParseError on a
// repeated instance id.
Submission ReadSubmission(const std::filesystem::path& path);
Submission SubmissionFromJson(const Json& j);
Json ToJson(const Submission& submission);

// Ids in the submission that no instance has.
std::vector<std::string> UnknownInstanceIds(const Submission& submission,
                                            const std::vector<TaskInstance>& instances);

enum class Metric { kBleu1, kBleu2, kRouge1, kRougeL, kEmbedF, kAccuracy };
std::string ToString(Metric metric);
Metric ParseMetric(const std::string& name);

// Maps a free-text answer to the label vocabulary of `task`: "A"/"B" for
// TS-CT, low/medium/high for BS and Blog, upvoted/downvoted, an option
// letter, or a 1-7 rating. Empty string when nothing matches.
std::string NormalizePrediction(const std::string& task, const std::string& raw);

struct ScoreReport {
  std::string task;
  Metric metric = Metric::kBleu2;
  double value = 0.0;  // mean; x100 for bleu and rouge
  std::int64_t scored = 0;
  std::vector<std::string> missing;  // instances without a generation
  std::optional<std::string> unavailable;  // reason the metric was skipped
};

Json ToJson(const ScoreReport& report);

// Scores every instance of `task` (all tasks when empty) that has a
// generation. PreconditionError for ids unknown to `instances`. kEmbedF
// needs `embedder`; a CapabilityError from it marks the report unavailable.
ScoreReport ScoreSubmission(const std::vector<TaskInstance>& instances,
                            const Submission& submission, Metric metric,
                            const std::string& task = "",
                            providers::ProviderClient* embedder = nullptr,
                            std::size_t workers = 1);

// Runs the generator on each HE-* instance and scores against study data:
// HE-Vote and HE-Reason accuracy, HE-Feedback mean log-likelihood of the
// participant's text via the scorer, HE-Opinion Spearman of predicted vs
// true ratings. Sections without a usable provider report "unavailable".
Json ScoreHumanTransfer(const std::vector<TaskInstance>& instances,
                        providers::ProviderClient* generator,
                        providers::ProviderClient* scorer, std::size_t workers = 1);

}  // namespace persuasion::benchkit

#endif  // PERSUASION_BENCHKIT_SCORING_H_
