#pragma once

// Sharded work over a fixed index range. Shard boundaries depend only on the
// shard count, and callers merge per-shard results in index order.

#include <cstdint>
#include <functional>

namespace binform {

// BINFORM_THREADS if set and positive, otherwise the hardware concurrency.
int default_threads();

// Runs body(shard) for shard in [0, shards) on up to `threads` workers.
// The first exception thrown by any shard is rethrown after all finish.
void run_shards(std::int64_t shards, int threads, const std::function<void(std::int64_t)>& body);

// Splits [0, total) into `shards` contiguous blocks.
struct Block {
    std::int64_t begin, end;
};
Block shard_block(std::int64_t total, std::int64_t shards, std::int64_t shard);

} // namespace binform
