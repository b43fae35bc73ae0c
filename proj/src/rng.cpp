#include "binform/rng.hpp"

#include <stdexcept>

namespace binform {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::string_view module, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (unsigned char c : module) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    key_ = splitmix64(splitmix64(seed) ^ h) ^ splitmix64(index + 0x632be59bd9b4e019ull);
}

std::uint64_t Stream::next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

std::int64_t Stream::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

} // namespace binform
