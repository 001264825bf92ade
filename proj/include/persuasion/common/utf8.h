#ifndef PERSUASION_COMMON_UTF8_H_
#define PERSUASION_COMMON_UTF8_H_

#include <string>
#include <string_view>

namespace persuasion::utf8 {

// Invalid byte sequences decode to U+FFFD one byte at a time, so decoding
// never fails and always consumes the whole input.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view codepoints);
void AppendCodepoint(char32_t cp, std::string* out);

// Decodes the codepoint starting at `pos`, storing its byte length in `len`.
char32_t DecodeAt(std::string_view text, std::size_t pos, std::size_t* len);

}  // namespace persuasion::utf8

#endif  // PERSUASION_COMMON_UTF8_H_
