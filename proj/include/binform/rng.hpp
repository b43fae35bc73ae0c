#pragma once

// Counter-based pseudorandom streams keyed by (seed, module, index), so a
// case draws the same numbers no matter which worker runs it.

#include <cstdint>
#include <string_view>

namespace binform {

class Stream {
public:
    Stream(std::uint64_t seed, std::string_view module, std::uint64_t index);

    std::uint64_t next();
    // Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    bool coin() { return next() & 1; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace binform
