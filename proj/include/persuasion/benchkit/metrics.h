#ifndef PERSUASION_BENCHKIT_METRICS_H_
#define PERSUASION_BENCHKIT_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "persuasion/providers/operations.h"

namespace persuasion::benchkit {

// Normalizes, lowercases and splits on whitespace.
std::vector<std::string> MetricTokens(const std::string& text);

// Sentence BLEU with uniform weights over n = 1..max_n (max_n in {1, 2}),
// clipped counts against the per-n-gram maximum over references and the
// brevity penalty against the closest reference length (shorter on ties).
// For n >= 2 a zero match count becomes 1 / (candidate n-grams + 1).
// Empty candidate -> 0.
double Bleu(const std::string& candidate, const std::vector<std::string>& references,
            int max_n);

enum class RougeVariant { kUnigram, kLcs };

// F1 of clipped unigram overlap or token LCS; max over references.
double Rouge(const std::string& candidate, const std::vector<std::string>& references,
             RougeVariant variant);

// Greedy max-cosine token matching F1 (cosines clamped to [0,1]). Throws
// CapabilityError when the embedder has no token-level output.
double EmbedFScore(const std::string& candidate, const std::string& reference,
                   providers::ProviderClient& embedder);
// Same computation on precomputed token vectors.
double EmbedFScore(const std::vector<providers::EmbeddingVector>& candidate,
                   const std::vector<providers::EmbeddingVector>& reference);

// PreconditionError on length mismatch or empty input.
double Accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& labels);

// PreconditionError for unequal lengths or fewer than 2 points,
// UndefinedError for zero variance.
double Pearson(std::span<const double> xs, std::span<const double> ys);
// Pearson on average ranks.
double Spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace persuasion::benchkit

#endif  // PERSUASION_BENCHKIT_METRICS_H_
