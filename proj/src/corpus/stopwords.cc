#include "persuasion/corpus/stopwords.h"

#include <algorithm>
#include <cctype>

#include "persuasion/corpus/text.h"

namespace persuasion::corpus {
namespace {

// Sorted for binary search.
constexpr std::string_view kStopwords[] = {
    "a",        "about",   "above",   "after",    "again",     "against",
    "ain",      "all",     "am",      "an",       "and",       "any",
    "are",      "aren",    "as",      "at",       "be",        "because",
    "been",     "before",  "being",   "below",    "between",   "both",
    "but",      "by",      "can",     "couldn",   "d",         "did",
    "didn",     "do",      "does",    "doesn",    "doing",     "don",
    "down",     "during",  "each",    "few",      "for",       "from",
    "further",  "had",     "hadn",    "has",      "hasn",      "have",
    "haven",    "having",  "he",      "her",      "here",      "hers",
    "herself",  "him",     "himself", "his",      "how",       "i",
    "if",       "in",      "into",    "is",       "isn",       "it",
    "its",      "itself",  "just",    "ll",       "m",         "ma",
    "me",       "mightn",  "more",    "most",     "mustn",     "my",
    "myself",   "needn",   "no",      "nor",      "not",       "now",
    "o",        "of",      "off",     "on",       "once",      "only",
    "or",       "other",   "our",     "ours",     "ourselves", "out",
    "over",     "own",     "re",      "s",        "same",      "shan",
    "she",      "should",  "shouldn", "so",       "some",      "such",
    "t",        "than",    "that",    "the",      "their",     "theirs",
    "them",     "themselves", "then", "there",    "these",     "they",
    "this",     "those",   "through", "to",       "too",       "under",
    "until",    "up",      "ve",      "very",     "was",       "wasn",
    "we",       "were",    "weren",   "what",     "when",      "where",
    "which",    "while",   "who",     "whom",     "why",       "will",
    "with",     "won",     "wouldn",  "y",        "you",       "your",
    "yours",    "yourself", "yourselves", "amp",  "get",       "got",
    "let",      "new",     "now",     "one",      "rt",        "today",
    "via",      "would",   "could",   "also",     "us",
};

const std::vector<std::string_view>& SortedStopwords() {
  static const std::vector<std::string_view> sorted = [] {
    std::vector<std::string_view> v(std::begin(kStopwords), std::end(kStopwords));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }();
  return sorted;
}

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

bool IsStopword(std::string_view word) {
  const auto& v = SortedStopwords();
  return std::binary_search(v.begin(), v.end(), word);
}

std::vector<std::string> ContentWords(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '<') {
      // Placeholders such as <USERNAME> are not words.
      std::size_t close = text.find('>', i);
      if (close != std::string_view::npos && close - i <= 16) {
        i = close + 1;
        continue;
      }
    }
    if (c == ':') {
      // Emoji short-names :like_this:.
      std::size_t j = i + 1;
      while (j < text.size() && (IsWordByte(text[j]) || text[j] == '-')) ++j;
      if (j < text.size() && text[j] == ':' && j > i + 1) {
        i = j + 1;
        continue;
      }
    }
    if (!IsAlnum(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsAlnum(text[j])) ++j;
    std::string word = ToLowerAscii(text.substr(i, j - i));
    i = j;
    if (word.size() < 2) continue;
    if (std::all_of(word.begin(), word.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      continue;
    }
    if (IsStopword(word)) continue;
    out.push_back(std::move(word));
  }
  return out;
}

}  // namespace persuasion::corpus
