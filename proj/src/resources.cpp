#include "fedsched/resources.hpp"

#include "fedsched/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fedsched {

bool fits_within(const ResourceVector& a, const ResourceVector& b) noexcept {
    return a.cpu_millicores <= b.cpu_millicores && a.memory_bytes <= b.memory_bytes &&
           a.gpu_count <= b.gpu_count;
}

ResourceVector checked_sub(const ResourceVector& a, const ResourceVector& b) {
    ResourceVector r{a.cpu_millicores - b.cpu_millicores, a.memory_bytes - b.memory_bytes,
                     a.gpu_count - b.gpu_count};
    if (!r.valid())
        throw InvariantViolation("resource underflow: " + to_string(a) + " - " + to_string(b));
    return r;
}

ResourceVector saturating_sub(const ResourceVector& a, const ResourceVector& b) noexcept {
    return {std::max<std::int64_t>(0, a.cpu_millicores - b.cpu_millicores),
            std::max<std::int64_t>(0, a.memory_bytes - b.memory_bytes),
            std::max<std::int64_t>(0, a.gpu_count - b.gpu_count)};
}

namespace {

double parse_number(std::string_view text, std::string_view whole) {
    const std::string s(text);
    std::size_t consumed = 0;
    double v = 0;
    try {
        v = std::stod(s, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (s.empty() || consumed != s.size() || v < 0 || !std::isfinite(v))
        throw std::invalid_argument("invalid quantity '" + std::string(whole) + "'");
    return v;
}

} // namespace

std::int64_t parse_cpu(std::string_view text) {
    if (!text.empty() && text.back() == 'm')
        return static_cast<std::int64_t>(std::llround(parse_number(text.substr(0, text.size() - 1), text)));
    return static_cast<std::int64_t>(std::llround(parse_number(text, text) * 1000.0));
}

std::int64_t parse_memory(std::string_view text) {
    struct Suffix {
        std::string_view s;
        double scale;
    };
    static constexpr Suffix suffixes[] = {
        {"Ki", 1024.0}, {"Mi", 1024.0 * 1024}, {"Gi", 1024.0 * 1024 * 1024},
        {"Ti", 1024.0 * 1024 * 1024 * 1024}, {"K", 1e3}, {"M", 1e6}, {"G", 1e9}, {"T", 1e12},
    };
    for (const auto& [suffix, scale] : suffixes) {
        if (text.size() > suffix.size() && text.ends_with(suffix))
            return static_cast<std::int64_t>(
                std::llround(parse_number(text.substr(0, text.size() - suffix.size()), text) * scale));
    }
    return static_cast<std::int64_t>(std::llround(parse_number(text, text)));
}

std::string to_string(const ResourceVector& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ResourceVector& r) {
    return os << "(cpu=" << r.cpu_millicores << "m, mem=" << r.memory_bytes << "B, gpu=" << r.gpu_count << ")";
}

} // namespace fedsched
