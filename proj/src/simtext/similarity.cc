#include "persuasion/simtext/similarity.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "persuasion/common/errors.h"
#include "persuasion/common/utf8.h"

namespace persuasion::simtext {

SimilarityScore CosineSimilarity(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractError("cosine of vectors with dimensions " +
                        std::to_string(a.size()) + " and " +
                        std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw UndefinedError("cosine similarity of a zero vector is undefined");
  }
  double cos = dot / (std::sqrt(na) * std::sqrt(nb));
  return {std::clamp(cos, 0.0, 1.0), SimilarityKind::kCosine};
}

SimilarityScore CosineSimilarity(const providers::EmbeddingVector& a,
                                 const providers::EmbeddingVector& b) {
  return CosineSimilarity(std::span<const double>(a.values),
                          std::span<const double>(b.values));
}

std::size_t LcsLength(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t IndelDistance(std::string_view a, std::string_view b) {
  std::u32string ua = utf8::Decode(a);
  std::u32string ub = utf8::Decode(b);
  return ua.size() + ub.size() - 2 * LcsLength(ua, ub);
}

SimilarityScore EditSimilarity(std::string_view a, std::string_view b) {
  std::u32string ua = utf8::Decode(a);
  std::u32string ub = utf8::Decode(b);
  const std::size_t total = ua.size() + ub.size();
  if (total == 0) return {1.0, SimilarityKind::kEdit};
  const std::size_t edits = total - 2 * LcsLength(ua, ub);
  return {1.0 - static_cast<double>(edits) / static_cast<double>(total),
          SimilarityKind::kEdit};
}

SimilarityScore JaccardSimilarity(const std::set<std::string>& a,
                                  const std::set<std::string>& b) {
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  if (uni == 0) return {0.0, SimilarityKind::kJaccard};
  return {static_cast<double>(inter) / static_cast<double>(uni),
          SimilarityKind::kJaccard};
}

SimilarityScore MediaSimilarity(const corpus::MediaAsset& m1,
                                const corpus::MediaAsset& m2,
                                providers::ProviderClient& embedder) {
  for (const auto* m : {&m1, &m2}) {
    if (!m->caption) {
      throw PreconditionError("media asset '" + m->asset_id + "' has no caption");
    }
  }
  auto e1 = providers::EmbedText(*m1.caption, embedder);
  auto e2 = providers::EmbedText(*m2.caption, embedder);
  SimilarityScore s = CosineSimilarity(e1, e2);
  s.kind = SimilarityKind::kMedia;
  return s;
}

}  // namespace persuasion::simtext
