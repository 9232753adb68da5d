#include "fedsched/time.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fedsched {

TimeMs parse_duration(std::string_view text) {
    auto fail = [&] { return std::invalid_argument("invalid duration '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();

    std::size_t unit_pos = 0;
    while (unit_pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[unit_pos])) || text[unit_pos] == '.'))
        ++unit_pos;
    if (unit_pos == 0) throw fail();

    const std::string number(text.substr(0, unit_pos));
    const std::string_view unit = text.substr(unit_pos);

    double scale = 0;
    if (unit.empty() || unit == "ms") scale = 1;
    else if (unit == "s") scale = kSecond;
    else if (unit == "m" || unit == "min") scale = kMinute;
    else if (unit == "h") scale = kHour;
    else throw fail();

    std::size_t consumed = 0;
    double value = 0;
    try {
        value = std::stod(number, &consumed);
    } catch (const std::exception&) {
        throw fail();
    }
    if (consumed != number.size() || value < 0) throw fail();

    const double ms = value * scale;
    if (ms > 9.0e15) throw fail();
    const double rounded = std::round(ms);
    if (std::abs(rounded - ms) > 1e-6) throw fail();
    return static_cast<TimeMs>(rounded);
}

std::string format_duration(TimeMs t) {
    if (t != 0 && t % kHour == 0) return std::to_string(t / kHour) + "h";
    if (t != 0 && t % kMinute == 0) return std::to_string(t / kMinute) + "m";
    if (t != 0 && t % kSecond == 0) return std::to_string(t / kSecond) + "s";
    return std::to_string(t) + "ms";
}

} // namespace fedsched
