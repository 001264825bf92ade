#ifndef PERSUASION_CORPUS_TEXT_H_
#define PERSUASION_CORPUS_TEXT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace persuasion::corpus {

inline constexpr std::string_view kUsernamePlaceholder = "<USERNAME>";
inline constexpr std::string_view kHyperlinkPlaceholder = "<HYPERLINK>";

// Replaces @-handles with <USERNAME>, URLs with <HYPERLINK> and emoji with
// ":short_name:" from the shipped table. Everything else is preserved.
// Idempotent.
std::string NormalizeText(std::string_view raw);

struct EmojiEntry {
  char32_t codepoint;
  const char* short_name;
};

std::span<const EmojiEntry> EmojiTable();
std::string_view EmojiTableVersion();
std::optional<std::string_view> EmojiShortName(char32_t codepoint);

// ASCII letters, digits and '_'.
bool IsWordByte(char c);

// Byte ranges [begin, end) of URLs ("http://", "https://" or a "www."
// prefix at a word boundary, up to whitespace, minus trailing punctuation).
std::vector<std::pair<std::size_t, std::size_t>> FindUrls(std::string_view text);

// Handle or tag names following `sigil` ('@' or '#') at a word boundary.
std::vector<std::string> FindSigilTokens(std::string_view text, char sigil);

// "https://www.Example.com/a/b/?q=1" -> "example.com/a/b".
std::string NormalizeLinkKey(std::string_view url);
std::string LinkHost(std::string_view url);
// Host reduced to its registrable part ("news.bbc.co.uk" -> "bbc.co.uk").
std::string RegistrableDomain(std::string_view host);

std::vector<std::string> SplitWhitespace(std::string_view text);
std::string ToLowerAscii(std::string_view text);

}  // namespace persuasion::corpus

#endif  // PERSUASION_CORPUS_TEXT_H_
