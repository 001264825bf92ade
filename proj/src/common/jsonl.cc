#include "persuasion/common/jsonl.h"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "persuasion/common/errors.h"

namespace persuasion {

std::vector<JsonLine> ReadJsonLines(std::istream& in) {
  std::vector<JsonLine> out;
  std::string text;
  std::int64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back({line, Json::parse(text)});
    } catch (const Json::parse_error& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
    }
  }
  return out;
}

std::vector<JsonLine> ReadJsonLinesFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open " + path.string());
  return ReadJsonLines(in);
}

void WriteJsonLines(std::ostream& out, const std::vector<Json>& values) {
  for (const auto& v : values) out << v.dump() << '\n';
}

void WriteJsonLinesFile(const std::filesystem::path& path,
                        const std::vector<Json>& values) {
  std::ostringstream buf;
  WriteJsonLines(buf, values);
  AtomicWriteFile(path, buf.str());
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; translate it to a line number.
    std::int64_t line = 1;
    for (std::size_t i = 0; i < text.size() && i < e.byte; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " +
                         e.what(),
                     line);
  }
}

void AtomicWriteFile(const std::filesystem::path& path,
                     const std::string& contents) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << ::getpid() << "."
           << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
           << counter++;
  auto tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io", "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("io", "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void AppendJsonLine(const std::filesystem::path& path, const Json& value) {
  std::string line = value.dump() + "\n";
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error("io", "cannot append to " + path.string());
  const char* data = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd, data, left);
    if (n < 0) {
      ::close(fd);
      throw Error("io", "append failed for " + path.string());
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

}  // namespace persuasion
