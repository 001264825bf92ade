#ifndef PERSUASION_COMMON_JSONL_H_
#define PERSUASION_COMMON_JSONL_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace persuasion {

using Json = nlohmann::json;

// One parsed line of a newline-delimited JSON stream. `line` is 1-based.
struct JsonLine {
  std::int64_t line = 0;
  Json value;
};

// Blank lines are skipped. Throws ParseError carrying the line number.
std::vector<JsonLine> ReadJsonLines(std::istream& in);
std::vector<JsonLine> ReadJsonLinesFile(const std::filesystem::path& path);

void WriteJsonLines(std::ostream& out, const std::vector<Json>& values);
void WriteJsonLinesFile(const std::filesystem::path& path,
                        const std::vector<Json>& values);

Json ReadJsonFile(const std::filesystem::path& path);
std::string ReadTextFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void AtomicWriteFile(const std::filesystem::path& path,
                     const std::string& contents);

// Appends one line and flushes it to the OS before returning.
void AppendJsonLine(const std::filesystem::path& path, const Json& value);

}  // namespace persuasion

#endif  // PERSUASION_COMMON_JSONL_H_
