#include "binform/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace binform {

int default_threads() {
    if (const char* env = std::getenv("BINFORM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void run_shards(std::int64_t shards, int threads, const std::function<void(std::int64_t)>& body) {
    if (shards <= 0) return;
    threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, shards));
    if (threads == 1) {
        for (std::int64_t s = 0; s < shards; ++s) body(s);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex lock;
    auto worker = [&] {
        while (true) {
            std::int64_t s = next.fetch_add(1);
            if (s >= shards) return;
            try {
                body(s);
            } catch (...) {
                std::lock_guard<std::mutex> guard(lock);
                if (!failure) failure = std::current_exception();
                next = shards;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

Block shard_block(std::int64_t total, std::int64_t shards, std::int64_t shard) {
    std::int64_t base = total / shards, extra = total % shards;
    std::int64_t begin = shard * base + std::min(shard, extra);
    return {begin, begin + base + (shard < extra ? 1 : 0)};
}

} // namespace binform
