#include "persuasion/providers/operations.h"

#include <cctype>

#include "persuasion/common/errors.h"
#include "persuasion/common/stats.h"

namespace persuasion::providers {
namespace {

EmbeddingVector VectorFrom(const Json& j) {
  EmbeddingVector v;
  v.values = j.get<std::vector<double>>();
  if (v.values.empty()) throw ContractError("embedder returned an empty vector");
  return v;
}

std::string TextField(const Json& payload) {
  if (!payload.is_object() || !payload.contains("text") ||
      !payload["text"].is_string()) {
    throw ContractError("provider payload lacks a 'text' string");
  }
  return payload["text"].get<std::string>();
}

}  // namespace

std::string ToString(Winner winner) {
  switch (winner) {
    case Winner::kFirst:
      return "first";
    case Winner::kSecond:
      return "second";
    case Winner::kTie:
      return "tie";
  }
  return "tie";
}

Winner ParseWinner(const std::string& name) {
  if (name == "first") return Winner::kFirst;
  if (name == "second") return Winner::kSecond;
  if (name == "tie") return Winner::kTie;
  throw ParseError("unknown winner '" + name + "'", 0);
}

double TokenScore::MeanLogLikelihood() const {
  if (logprobs.empty()) throw PreconditionError("empty token score");
  return StableMean(logprobs);
}

EmbeddingVector EmbedText(const std::string& text, ProviderClient& embedder) {
  Json payload = embedder.Call(Role::kEmbedder, "embed", Json{{"text", text}});
  EmbeddingVector v = VectorFrom(payload.at("vector"));
  embedder.PinEmbeddingDim(v.dim());
  return v;
}

TokenEmbeddings EmbedTokens(const std::string& text, ProviderClient& embedder) {
  Json payload =
      embedder.Call(Role::kEmbedder, "embed_tokens", Json{{"text", text}});
  if (!payload.contains("tokens") || !payload.contains("vectors")) {
    throw CapabilityError("embedder does not provide token-level vectors");
  }
  TokenEmbeddings out;
  out.tokens = payload["tokens"].get<std::vector<std::string>>();
  for (const auto& v : payload["vectors"]) out.vectors.push_back(VectorFrom(v));
  if (out.tokens.size() != out.vectors.size()) {
    throw ContractError("token/vector count mismatch from embedder");
  }
  return out;
}

CaptionResult CaptionMedia(const corpus::MediaAsset& asset,
                           ProviderClient& captioner) {
  if (asset.caption) return {asset, std::nullopt};
  try {
    Json payload = captioner.Call(
        Role::kCaptioner, "caption",
        Json{{"asset_id", asset.asset_id}, {"keywords", asset.keywords}});
    corpus::MediaAsset out = asset;
    out.caption = payload.at("caption").get<std::string>();
    if (payload.contains("keywords")) {
      out.keywords = payload["keywords"].get<std::vector<std::string>>();
    }
    return {out, std::nullopt};
  } catch (const ContractError&) {
    throw;
  } catch (const std::exception& e) {
    return {asset, std::string(e.what())};
  }
}

JudgeVerdict ParseJudgeResponse(const std::string& raw) {
  JudgeVerdict verdict;
  verdict.raw_response = raw;
  // Whole-response match after stripping wrappers: "A", "(B)", "'A'.", ...
  std::string core;
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c))) core.push_back(c);
  }
  auto upper = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  core = upper(core);
  if (core == "A") {
    verdict.winner = Winner::kFirst;
    return verdict;
  }
  if (core == "B") {
    verdict.winner = Winner::kSecond;
    return verdict;
  }
  // Otherwise take the first standalone option letter, e.g. "Answer: B" or
  // "(A) is better".
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c != 'A' && c != 'B') continue;
    bool left = i == 0 || !std::isalnum(static_cast<unsigned char>(raw[i - 1]));
    bool right = i + 1 == raw.size() ||
                 !std::isalnum(static_cast<unsigned char>(raw[i + 1]));
    if (left && right) {
      verdict.winner = c == 'A' ? Winner::kFirst : Winner::kSecond;
      return verdict;
    }
  }
  verdict.winner = Winner::kTie;
  verdict.parse_warning = true;
  return verdict;
}

JudgeVerdict JudgePair(const std::string& prompt, const std::string& option_a,
                       const std::string& option_b, ProviderClient& judge) {
  Json payload = judge.Call(
      Role::kJudge, "judge",
      Json{{"prompt", prompt}, {"option_a", option_a}, {"option_b", option_b}});
  return ParseJudgeResponse(TextField(payload));
}

std::string Generate(const std::string& prompt, ProviderClient& generator) {
  Json payload =
      generator.Call(Role::kGenerator, "generate", Json{{"prompt", prompt}});
  return TextField(payload);
}

std::string Classify(const std::string& text,
                     const std::vector<std::string>& labels,
                     ProviderClient& classifier) {
  Json payload = classifier.Call(Role::kClassifier, "classify",
                                 Json{{"text", text}, {"labels", labels}});
  if (!payload.contains("label") || !payload["label"].is_string()) {
    throw ContractError("classifier payload lacks a 'label' string");
  }
  return payload["label"].get<std::string>();
}

TokenScore ScoreCompletion(const std::string& prompt, const std::string& target,
                           ProviderClient& scorer) {
  if (scorer.config().role != Role::kScorer) {
    throw ContractError("operation requires a scorer provider");
  }
  if (target.empty()) throw PreconditionError("cannot score an empty target");
  Json payload = scorer.Call(Role::kScorer, "score",
                             Json{{"prompt", prompt}, {"target", target}});
  if (!payload.contains("logprobs")) {
    throw CapabilityError("scorer did not return log-probabilities");
  }
  TokenScore score;
  score.tokens = payload.value("tokens", std::vector<std::string>{});
  score.logprobs = payload["logprobs"].get<std::vector<double>>();
  if (score.tokens.size() != score.logprobs.size()) {
    throw ContractError("token/logprob count mismatch from scorer");
  }
  if (score.logprobs.empty()) throw ContractError("scorer returned no tokens");
  for (double lp : score.logprobs) {
    if (lp > 0.0) throw ContractError("scorer returned a positive log-probability");
  }
  return score;
}

}  // namespace persuasion::providers
