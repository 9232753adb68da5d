#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fedsched {

// Seed for a named sub-stream of `root`. Streams are keyed by a stable label,
// so adding a new consumer never shifts another consumer's draws.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

// Deterministic random stream. The engine is mt19937_64 (bit-exact across
// standard libraries); the distributions below are hand-rolled for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0)
        : engine_(seed) {}
    Rng(std::uint64_t root, std::string_view label)
        : engine_(derive_seed(root, label)) {}

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    double exponential(double rate);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace fedsched
