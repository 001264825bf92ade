#ifndef PERSUASION_COMMON_TIMEUTIL_H_
#define PERSUASION_COMMON_TIMEUTIL_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace persuasion {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

// Accepts "YYYY-MM-DD HH:MM:SS", "YYYY-MM-DDTHH:MM:SS" with optional
// trailing "Z" or "+00:00", and a bare "YYYY-MM-DD" (midnight UTC).
std::optional<Timestamp> ParseTimestamp(std::string_view text);
std::optional<Date> ParseDate(std::string_view text);

// Canonical wire form: "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatTimestamp(Timestamp ts);
// Human form used inside prompts: "YYYY-MM-DD HH:MM:SS".
std::string FormatPromptTimestamp(Timestamp ts);
std::string FormatDate(Date d);
// "YYYY-MM", the calendar month a timestamp falls in (UTC).
std::string MonthKey(Timestamp ts);

inline Date DayOf(Timestamp ts) {
  return std::chrono::floor<std::chrono::days>(ts);
}

// Absolute difference in fractional days.
double DayGap(Timestamp a, Timestamp b);

}  // namespace persuasion

#endif  // PERSUASION_COMMON_TIMEUTIL_H_
