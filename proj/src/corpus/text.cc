#include "persuasion/corpus/text.h"

#include <algorithm>
#include <cctype>

#include "persuasion/common/utf8.h"

namespace persuasion::corpus {
namespace {

constexpr EmojiEntry kEmojiTable[] = {
#include "emoji_table.inc"
};

bool StartsWithAt(std::string_view text, std::size_t pos,
                  std::string_view prefix) {
  return text.size() - pos >= prefix.size() &&
         text.compare(pos, prefix.size(), prefix) == 0;
}

bool IsSpaceByte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsTrailingPunct(char c) {
  switch (c) {
    case '.':
    case ',':
    case ';':
    case ':':
    case '!':
    case '?':
    case ')':
    case ']':
    case '}':
    case '"':
    case '\'':
      return true;
    default:
      return false;
  }
}

}  // namespace

bool IsWordByte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

std::span<const EmojiEntry> EmojiTable() { return kEmojiTable; }

std::string_view EmojiTableVersion() { return PERSUASION_EMOJI_TABLE_VERSION; }

std::optional<std::string_view> EmojiShortName(char32_t codepoint) {
  auto it = std::lower_bound(
      std::begin(kEmojiTable), std::end(kEmojiTable), codepoint,
      [](const EmojiEntry& e, char32_t cp) { return e.codepoint < cp; });
  if (it == std::end(kEmojiTable) || it->codepoint != codepoint) {
    return std::nullopt;
  }
  return std::string_view(it->short_name);
}

std::vector<std::pair<std::size_t, std::size_t>> FindUrls(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool scheme = StartsWithAt(text, pos, "http://") ||
                  StartsWithAt(text, pos, "https://");
    bool www = !scheme && StartsWithAt(text, pos, "www.") &&
               (pos == 0 || !IsWordByte(text[pos - 1]));
    if (!scheme && !www) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !IsSpaceByte(text[end])) ++end;
    std::size_t trimmed = end;
    while (trimmed > pos && IsTrailingPunct(text[trimmed - 1])) --trimmed;
    std::size_t min_len = scheme ? (text[pos + 4] == 's' ? 8 : 7) : 4;
    if (trimmed - pos > min_len) {
      out.emplace_back(pos, trimmed);
      pos = trimmed;
    } else {
      pos = end;
    }
  }
  return out;
}

std::vector<std::string> FindSigilTokens(std::string_view text, char sigil) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != sigil) continue;
    if (i > 0 && IsWordByte(text[i - 1])) continue;
    std::size_t j = i + 1;
    while (j < text.size() && IsWordByte(text[j])) ++j;
    if (j > i + 1) {
      out.emplace_back(text.substr(i + 1, j - i - 1));
      i = j - 1;
    }
  }
  return out;
}

std::string NormalizeText(std::string_view raw) {
  // Pass 1: URLs. They may contain '@' or emoji-free punctuation that the
  // later passes must not see.
  std::string no_urls;
  no_urls.reserve(raw.size());
  std::size_t last = 0;
  for (auto [b, e] : FindUrls(raw)) {
    no_urls.append(raw.substr(last, b - last));
    no_urls.append(kHyperlinkPlaceholder);
    last = e;
  }
  no_urls.append(raw.substr(last));

  // Pass 2: @-handles.
  std::string no_handles;
  no_handles.reserve(no_urls.size());
  for (std::size_t i = 0; i < no_urls.size(); ++i) {
    char c = no_urls[i];
    if (c == '@' && (i == 0 || !IsWordByte(no_urls[i - 1]))) {
      std::size_t j = i + 1;
      while (j < no_urls.size() && IsWordByte(no_urls[j])) ++j;
      // A chained "@a@b" is one handle: once "@a" became a placeholder,
      // "@b" would otherwise qualify on the next pass.
      while (j > i + 1 && j + 1 < no_urls.size() && no_urls[j] == '@' &&
             IsWordByte(no_urls[j + 1])) {
        ++j;
        while (j < no_urls.size() && IsWordByte(no_urls[j])) ++j;
      }
      if (j > i + 1) {
        no_handles.append(kUsernamePlaceholder);
        i = j - 1;
        continue;
      }
    }
    no_handles.push_back(c);
  }

  // Pass 3: emoji. A variation selector directly after a replaced emoji is
  // part of its presentation and is dropped with it.
  std::string out;
  out.reserve(no_handles.size());
  std::size_t pos = 0;
  bool after_emoji = false;
  while (pos < no_handles.size()) {
    std::size_t len = 1;
    char32_t cp = utf8::DecodeAt(no_handles, pos, &len);
    if (after_emoji && cp == 0xFE0F) {
      pos += len;
      after_emoji = false;
      continue;
    }
    if (auto name = cp >= 0x80 ? EmojiShortName(cp) : std::nullopt) {
      out.push_back(':');
      out.append(*name);
      out.push_back(':');
      after_emoji = true;
    } else {
      out.append(no_handles, pos, len);
      after_emoji = false;
    }
    pos += len;
  }
  return out;
}

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string LinkHost(std::string_view url) {
  std::size_t start = 0;
  if (auto p = url.find("://"); p != std::string_view::npos) start = p + 3;
  std::size_t end = url.find_first_of("/?#", start);
  std::string host = ToLowerAscii(url.substr(start, end == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : end - start));
  if (auto at = host.rfind('@'); at != std::string::npos) host.erase(0, at + 1);
  if (auto colon = host.find(':'); colon != std::string::npos) host.erase(colon);
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);
  return host;
}

std::string NormalizeLinkKey(std::string_view url) {
  std::string host = LinkHost(url);
  std::size_t start = 0;
  if (auto p = url.find("://"); p != std::string_view::npos) start = p + 3;
  std::size_t path_start = url.find('/', start);
  std::string path;
  if (path_start != std::string_view::npos) {
    std::size_t path_end = url.find_first_of("?#", path_start);
    path = std::string(url.substr(path_start, path_end == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : path_end - path_start));
  } else if (auto q = url.find_first_of("?#", start);
             q != std::string_view::npos) {
    path.clear();
  }
  while (!path.empty() && path.back() == '/') path.pop_back();
  return host + path;
}

std::string RegistrableDomain(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (start <= host.size()) {
    std::size_t dot = host.find('.', start);
    if (dot == std::string_view::npos) {
      labels.push_back(host.substr(start));
      break;
    }
    labels.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  if (labels.size() <= 2) return std::string(host);
  static constexpr std::string_view kSecondLevel[] = {"co", "com", "org", "net",
                                                      "gov", "ac", "edu"};
  std::size_t keep = 2;
  const auto& tld = labels.back();
  const auto& sld = labels[labels.size() - 2];
  if (tld.size() == 2 &&
      std::find(std::begin(kSecondLevel), std::end(kSecondLevel), sld) !=
          std::end(kSecondLevel)) {
    keep = 3;
  }
  if (labels.size() <= keep) return std::string(host);
  std::string out;
  for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out.append(labels[i]);
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpaceByte(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpaceByte(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace persuasion::corpus
