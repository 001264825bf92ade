#ifndef PERSUASION_CORPUS_INGEST_H_
#define PERSUASION_CORPUS_INGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "persuasion/common/errors.h"
#include "persuasion/common/jsonl.h"
#include "persuasion/corpus/records.h"

namespace persuasion::corpus {

class DuplicatePostError : public Error {
 public:
  DuplicatePostError(const std::string& post_id, std::int64_t first_line,
                     std::int64_t second_line);

  std::int64_t first_line() const { return first_line_; }
  std::int64_t second_line() const { return second_line_; }

 private:
  std::int64_t first_line_;
  std::int64_t second_line_;
};

// Parses raw post records (post_id, account_id, created_at, text,
// like_count, optional media) and extracts hashtags, mentions, link domains
// and link keys from the raw text. Output is in canonical order. Throws
// ParseError with the record's line number for malformed input.
std::vector<PostRecord> IngestPosts(std::span<const JsonLine> records);

}  // namespace persuasion::corpus

#endif  // PERSUASION_CORPUS_INGEST_H_
