#include "persuasion/common/timeutil.h"

#include <cstdio>
#include <cstdlib>

namespace persuasion {
namespace {

bool ReadInt(std::string_view text, std::size_t pos, std::size_t len,
             int* out) {
  if (pos + len > text.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  *out = value;
  return true;
}

std::optional<Date> ParseDatePrefix(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!ReadInt(text, 0, 4, &y) || !ReadInt(text, 5, 2, &m) ||
      !ReadInt(text, 8, 2, &d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

}  // namespace

std::optional<Date> ParseDate(std::string_view text) {
  if (text.size() != 10) return std::nullopt;
  return ParseDatePrefix(text);
}

std::optional<Timestamp> ParseTimestamp(std::string_view text) {
  auto date = ParseDatePrefix(text);
  if (!date) return std::nullopt;
  if (text.size() == 10) return Timestamp{*date};
  if (text[10] != ' ' && text[10] != 'T') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (text.size() < 19 || text[13] != ':' || text[16] != ':' ||
      !ReadInt(text, 11, 2, &hh) || !ReadInt(text, 14, 2, &mm) ||
      !ReadInt(text, 17, 2, &ss)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  std::string_view rest = text.substr(19);
  if (!rest.empty() && rest != "Z" && rest != "+00:00") return std::nullopt;
  return Timestamp{*date} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

namespace {

std::string Format(Timestamp ts, char sep, bool zulu) {
  Date day = DayOf(ts);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss hms{ts - Timestamp{day}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u%c%02ld:%02ld:%02ld%s",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), sep,
                static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()), zulu ? "Z" : "");
  return buf;
}

}  // namespace

std::string FormatTimestamp(Timestamp ts) { return Format(ts, 'T', true); }

std::string FormatPromptTimestamp(Timestamp ts) {
  return Format(ts, ' ', false);
}

std::string FormatDate(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string MonthKey(Timestamp ts) { return FormatDate(DayOf(ts)).substr(0, 7); }

double DayGap(Timestamp a, Timestamp b) {
  auto diff = (a > b ? a - b : b - a).count();
  return static_cast<double>(diff) / 86400.0;
}

}  // namespace persuasion
