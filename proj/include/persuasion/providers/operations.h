#ifndef PERSUASION_PROVIDERS_OPERATIONS_H_
#define PERSUASION_PROVIDERS_OPERATIONS_H_

#include <optional>
#include <string>
#include <vector>

#include "persuasion/corpus/records.h"
#include "persuasion/providers/provider.h"

namespace persuasion::providers {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

enum class Winner { kFirst, kSecond, kTie };

std::string ToString(Winner winner);
Winner ParseWinner(const std::string& name);

struct JudgeVerdict {
  Winner winner = Winner::kTie;
  std::string raw_response;
  // Set when the response named neither option and was mapped to a tie.
  bool parse_warning = false;

  friend bool operator==(const JudgeVerdict&, const JudgeVerdict&) = default;
};

struct TokenScore {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;

  // Mean per-token log-likelihood.
  double MeanLogLikelihood() const;
};

struct TokenEmbeddings {
  std::vector<std::string> tokens;
  std::vector<EmbeddingVector> vectors;
};

EmbeddingVector EmbedText(const std::string& text, ProviderClient& embedder);

// Token-level vectors; CapabilityError when the embedder cannot produce
// them.
TokenEmbeddings EmbedTokens(const std::string& text, ProviderClient& embedder);

struct CaptionResult {
  corpus::MediaAsset asset;
  std::optional<std::string> error;
};

// Set-once: an asset that already has a caption is returned untouched and
// no request is made. Provider failures leave the asset unchanged and are
// reported in `error`.
CaptionResult CaptionMedia(const corpus::MediaAsset& asset,
                           ProviderClient& captioner);

// Maps a judge response to a winner. "A" or "B", bare or wrapped in
// brackets/quotes/punctuation, selects that option; in a longer answer the
// first standalone option letter wins. A response naming neither option is
// a tie with parse_warning set.
JudgeVerdict ParseJudgeResponse(const std::string& raw);

JudgeVerdict JudgePair(const std::string& prompt, const std::string& option_a,
                       const std::string& option_b, ProviderClient& judge);

std::string Generate(const std::string& prompt, ProviderClient& generator);

std::string Classify(const std::string& text,
                     const std::vector<std::string>& labels,
                     ProviderClient& classifier);

TokenScore ScoreCompletion(const std::string& prompt, const std::string& target,
                           ProviderClient& scorer);

}  // namespace persuasion::providers

#endif  // PERSUASION_PROVIDERS_OPERATIONS_H_
