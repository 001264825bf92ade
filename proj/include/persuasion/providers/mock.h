#ifndef PERSUASION_PROVIDERS_MOCK_H_
#define PERSUASION_PROVIDERS_MOCK_H_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "persuasion/providers/provider.h"

namespace persuasion::providers {

// In-process transport driven by a handler that maps the request
// {"role","task","payload"} to a response payload. Counts calls so tests can
// assert that no request was issued.
class MockTransport : public Transport {
 public:
  using Handler = std::function<Json(const Json& request)>;

  explicit MockTransport(Handler handler) : handler_(std::move(handler)) {}

  Json Post(const ProviderConfig& cfg, const Json& request) override;

  std::int64_t calls() const { return calls_.load(); }

 private:
  Handler handler_;
  std::atomic<std::int64_t> calls_{0};
};

// Replays `responses` as {"text": ...} payloads in order; the last one
// repeats once the script is exhausted.
std::shared_ptr<MockTransport> ScriptedTextMock(std::vector<std::string> responses);

// Built-in deterministic mocks addressed as mock://<name>:
//   embedder:   hash       hashed bag-of-words vectors, token vectors too
//   captioner:  keywords   caption built from the asset's keywords
//   judge:      first | second | longer | garbage
//   generator:  echo       returns the quoted draft with a suffix
//   classifier: keyword    first label named in the text, else "other"
//   scorer:     uniform | none
std::shared_ptr<MockTransport> MakeNamedMock(Role role, const std::string& name);

inline constexpr std::size_t kHashEmbeddingDim = 1024;

// Lowercased whitespace tokens with surrounding punctuation stripped; the
// tokenization used by the hash embedder.
std::vector<std::string> MockTokens(const std::string& text);
std::vector<double> HashEmbedding(const std::string& text);

}  // namespace persuasion::providers

#endif  // PERSUASION_PROVIDERS_MOCK_H_
