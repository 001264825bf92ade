#ifndef PERSUASION_CORPUS_STOPWORDS_H_
#define PERSUASION_CORPUS_STOPWORDS_H_

#include <string>
#include <string_view>
#include <vector>

namespace persuasion::corpus {

// Shipped English stopword list (lowercase ASCII).
bool IsStopword(std::string_view word);

// Lowercased content words of normalized text: runs of ASCII letters and
// digits, with placeholders, emoji short-names, pure numbers, one-letter
// tokens and stopwords dropped. Order of appearance is kept.
std::vector<std::string> ContentWords(std::string_view text);

}  // namespace persuasion::corpus

#endif  // PERSUASION_CORPUS_STOPWORDS_H_
