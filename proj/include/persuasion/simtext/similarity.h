#ifndef PERSUASION_SIMTEXT_SIMILARITY_H_
#define PERSUASION_SIMTEXT_SIMILARITY_H_

#include <set>
#include <span>
#include <string>
#include <string_view>

#include "persuasion/corpus/records.h"
#include "persuasion/providers/operations.h"

namespace persuasion::simtext {

enum class SimilarityKind { kCosine, kEdit, kJaccard, kMedia };

struct SimilarityScore {
  double value = 0.0;  // always in [0, 1]
  SimilarityKind kind = SimilarityKind::kCosine;
};

// dot(a,b) / (|a||b|), clamped below at 0. ContractError on a dimension
// mismatch, UndefinedError when either vector is all zeros.
SimilarityScore CosineSimilarity(std::span<const double> a,
                                 std::span<const double> b);
SimilarityScore CosineSimilarity(const providers::EmbeddingVector& a,
                                 const providers::EmbeddingVector& b);

// Longest common subsequence length over codepoints.
std::size_t LcsLength(std::u32string_view a, std::u32string_view b);

// Insertions plus deletions needed to turn a into b (no substitutions):
// len(a) + len(b) - 2 * LCS(a, b), counted in codepoints.
std::size_t IndelDistance(std::string_view a, std::string_view b);

// 1 - IndelDistance / (len(a) + len(b)); two empty strings score 1.
SimilarityScore EditSimilarity(std::string_view a, std::string_view b);

// |a ∩ b| / |a ∪ b|; two empty sets score 0.
SimilarityScore JaccardSimilarity(const std::set<std::string>& a,
                                  const std::set<std::string>& b);

// Cosine of the two captions' embeddings. PreconditionError naming the
// asset when either is uncaptioned.
SimilarityScore MediaSimilarity(const corpus::MediaAsset& m1,
                                const corpus::MediaAsset& m2,
                                providers::ProviderClient& embedder);

}  // namespace persuasion::simtext

#endif  // PERSUASION_SIMTEXT_SIMILARITY_H_
