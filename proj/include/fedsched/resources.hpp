#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fedsched {

constexpr std::int64_t kKiB = 1024;
constexpr std::int64_t kMiB = 1024 * kKiB;
constexpr std::int64_t kGiB = 1024 * kMiB;
constexpr std::int64_t kTiB = 1024 * kGiB;

// Quantity of compute resources. Used for node capacity, pod requests and
// accounting. Components are never negative; construction from negative
// values and underflowing subtraction throw.
struct ResourceVector {
    std::int64_t cpu_millicores = 0;
    std::int64_t memory_bytes = 0;
    std::int64_t gpu_count = 0;

    static ResourceVector cores(std::int64_t cpu, std::int64_t memory_gib, std::int64_t gpus = 0) {
        return {cpu * 1000, memory_gib * kGiB, gpus};
    }

    bool is_zero() const noexcept { return cpu_millicores == 0 && memory_bytes == 0 && gpu_count == 0; }
    bool valid() const noexcept { return cpu_millicores >= 0 && memory_bytes >= 0 && gpu_count >= 0; }

    friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

    ResourceVector& operator+=(const ResourceVector& o) noexcept {
        cpu_millicores += o.cpu_millicores;
        memory_bytes += o.memory_bytes;
        gpu_count += o.gpu_count;
        return *this;
    }
    friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) noexcept { return a += b; }
};

// Component-wise partial order: a <= b iff every component of a is <= b's.
bool fits_within(const ResourceVector& a, const ResourceVector& b) noexcept;

// a - b; throws InvariantViolation if any component would go negative.
ResourceVector checked_sub(const ResourceVector& a, const ResourceVector& b);

// a - b clamped at zero per component. Only for scoring estimates.
ResourceVector saturating_sub(const ResourceVector& a, const ResourceVector& b) noexcept;

// Kubernetes-style quantities. CPU: "2", "0.5", "500m". Memory: "16Gi",
// "512Mi", "1Ti", "4G", or plain bytes. Throw std::invalid_argument.
std::int64_t parse_cpu(std::string_view text);
std::int64_t parse_memory(std::string_view text);

std::string to_string(const ResourceVector& r);
std::ostream& operator<<(std::ostream& os, const ResourceVector& r);

} // namespace fedsched
