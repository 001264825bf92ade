#include "persuasion/providers/mock.h"

#include <algorithm>

#include "persuasion/common/errors.h"
#include "persuasion/common/hashing.h"
#include "persuasion/corpus/text.h"

namespace persuasion::providers {
namespace {

std::size_t Bucket(const std::string& token) {
  return static_cast<std::size_t>(Fnv1a64(token) % kHashEmbeddingDim);
}

bool ContainsWord(const std::string& text, const std::string& word) {
  for (const auto& tok : MockTokens(text)) {
    if (tok == word) return true;
  }
  return false;
}

std::string ExtractDraft(const std::string& prompt) {
  auto end = prompt.rfind('"');
  if (end == std::string::npos || end == 0) return prompt;
  auto begin = prompt.rfind('"', end - 1);
  if (begin == std::string::npos) return prompt;
  return prompt.substr(begin + 1, end - begin - 1);
}

Json EmbedderMock(const std::string& name, const Json& request) {
  if (name != "hash") throw ConfigError("unknown embedder mock '" + name + "'");
  const std::string task = request.at("task");
  const std::string text = request.at("payload").value("text", "");
  if (task == "embed") return Json{{"vector", HashEmbedding(text)}};
  if (task == "embed_tokens") {
    Json vectors = Json::array();
    auto tokens = MockTokens(text);
    for (const auto& tok : tokens) {
      std::vector<double> v(kHashEmbeddingDim, 0.0);
      v[Bucket(tok)] = 1.0;
      vectors.push_back(std::move(v));
    }
    return Json{{"tokens", tokens}, {"vectors", std::move(vectors)}};
  }
  throw CapabilityError("hash embedder does not support task '" + task + "'");
}

Json CaptionerMock(const std::string& name, const Json& request) {
  if (name != "keywords") {
    throw ConfigError("unknown captioner mock '" + name + "'");
  }
  const Json& payload = request.at("payload");
  auto keywords = payload.value("keywords", std::vector<std::string>{});
  std::string caption = "an image";
  if (keywords.empty()) {
    caption += " " + payload.value("asset_id", std::string());
  } else {
    caption += " showing";
    for (const auto& k : keywords) caption += " " + k;
  }
  return Json{{"caption", caption}, {"keywords", keywords}};
}

Json JudgeMock(const std::string& name, const Json& request) {
  const Json& payload = request.at("payload");
  if (name == "first") return Json{{"text", "A"}};
  if (name == "second") return Json{{"text", "B"}};
  if (name == "garbage") return Json{{"text", "maybe"}};
  if (name == "longer") {
    auto a = payload.value("option_a", std::string());
    auto b = payload.value("option_b", std::string());
    if (a.size() != b.size()) return Json{{"text", a.size() > b.size() ? "A" : "B"}};
    return Json{{"text", a >= b ? "A" : "B"}};
  }
  throw ConfigError("unknown judge mock '" + name + "'");
}

Json GeneratorMock(const std::string& name, const Json& request) {
  if (name != "echo") throw ConfigError("unknown generator mock '" + name + "'");
  std::string prompt = request.at("payload").value("prompt", "");
  return Json{{"text", ExtractDraft(prompt) + " #MustSee"}};
}

Json ClassifierMock(const std::string& name, const Json& request) {
  if (name != "keyword") {
    throw ConfigError("unknown classifier mock '" + name + "'");
  }
  const Json& payload = request.at("payload");
  std::string text = payload.value("text", "");
  auto labels = payload.value("labels", std::vector<std::string>{});
  if (labels.empty()) return Json{{"label", ""}};
  for (const auto& label : labels) {
    if (ContainsWord(text, corpus::ToLowerAscii(label))) return Json{{"label", label}};
  }
  if (std::find(labels.begin(), labels.end(), "other") != labels.end()) {
    return Json{{"label", "other"}};
  }
  return Json{{"label", labels.back()}};
}

Json ScorerMock(const std::string& name, const Json& request) {
  if (name == "none") throw CapabilityError("scorer mock has no log-probabilities");
  if (name != "uniform") throw ConfigError("unknown scorer mock '" + name + "'");
  auto tokens = corpus::SplitWhitespace(request.at("payload").value("target", ""));
  std::vector<double> logprobs(tokens.size(), -1.0);
  return Json{{"tokens", tokens}, {"logprobs", logprobs}};
}

}  // namespace

Json MockTransport::Post(const ProviderConfig&, const Json& request) {
  ++calls_;
  return Json{{"payload", handler_(request)}};
}

std::shared_ptr<MockTransport> ScriptedTextMock(std::vector<std::string> responses) {
  if (responses.empty()) throw ConfigError("scripted mock needs responses");
  auto state = std::make_shared<std::pair<std::mutex, std::size_t>>();
  return std::make_shared<MockTransport>(
      [responses = std::move(responses), state](const Json&) {
        std::lock_guard<std::mutex> lock(state->first);
        std::size_t i = std::min(state->second, responses.size() - 1);
        ++state->second;
        return Json{{"text", responses[i]}};
      });
}

std::shared_ptr<MockTransport> MakeNamedMock(Role role, const std::string& name) {
  using Fn = Json (*)(const std::string&, const Json&);
  Fn fn = nullptr;
  switch (role) {
    case Role::kEmbedder:
      fn = EmbedderMock;
      break;
    case Role::kCaptioner:
      fn = CaptionerMock;
      break;
    case Role::kJudge:
      fn = JudgeMock;
      break;
    case Role::kGenerator:
      fn = GeneratorMock;
      break;
    case Role::kClassifier:
      fn = ClassifierMock;
      break;
    case Role::kScorer:
      fn = ScorerMock;
      break;
  }
  // Validate the name eagerly so configuration errors surface at startup.
  static const std::vector<std::pair<Role, std::string>> kKnown = {
      {Role::kEmbedder, "hash"},     {Role::kCaptioner, "keywords"},
      {Role::kJudge, "first"},       {Role::kJudge, "second"},
      {Role::kJudge, "longer"},      {Role::kJudge, "garbage"},
      {Role::kGenerator, "echo"},    {Role::kClassifier, "keyword"},
      {Role::kScorer, "uniform"},    {Role::kScorer, "none"}};
  if (std::find(kKnown.begin(), kKnown.end(), std::make_pair(role, name)) ==
      kKnown.end()) {
    throw ConfigError("unknown mock provider '" + name + "' for role " +
                      ToString(role));
  }
  return std::make_shared<MockTransport>(
      [fn, name](const Json& request) { return fn(name, request); });
}

std::vector<std::string> MockTokens(const std::string& text) {
  std::vector<std::string> out;
  for (auto& raw : corpus::SplitWhitespace(text)) {
    std::string tok = corpus::ToLowerAscii(raw);
    std::size_t b = 0, e = tok.size();
    while (b < e && !corpus::IsWordByte(tok[b]) && tok[b] != '<' && tok[b] != '#') ++b;
    while (e > b && !corpus::IsWordByte(tok[e - 1]) && tok[e - 1] != '>') --e;
    if (e > b) out.push_back(tok.substr(b, e - b));
  }
  return out;
}

std::vector<double> HashEmbedding(const std::string& text) {
  std::vector<double> v(kHashEmbeddingDim, 0.0);
  for (const auto& tok : MockTokens(text)) v[Bucket(tok)] += 1.0;
  return v;
}

}  // namespace persuasion::providers
