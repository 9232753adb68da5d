#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fedsched {

// Simulated time and spans, in milliseconds.
using TimeMs = std::int64_t;

constexpr TimeMs kMillisecond = 1;
constexpr TimeMs kSecond = 1000;
constexpr TimeMs kMinute = 60 * kSecond;
constexpr TimeMs kHour = 60 * kMinute;

// Parses "250ms", "5s", "10m", "2h" (or a bare integer, taken as ms).
// Fractional values like "1.5s" are accepted. Throws std::invalid_argument.
TimeMs parse_duration(std::string_view text);

// Shortest exact rendering: 1500 -> "1500ms", 60000 -> "1m".
std::string format_duration(TimeMs t);

} // namespace fedsched
