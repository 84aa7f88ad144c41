#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace kvw {

// Worker count: KVW_THREADS if set to a positive integer, else hardware concurrency.
unsigned worker_count();

// Runs body(chunk_index, begin, end) over [0, count) split into fixed-size chunks.
//
// Chunk boundaries depend only on `count` and `chunk`, never on the worker
// count, so callers that store one partial result per chunk and merge them
// in chunk order get bit-identical output for any thread count.
void parallel_chunks(std::size_t count, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t count, std::size_t chunk) {
  return chunk == 0 ? 0 : (count + chunk - 1) / chunk;
}

}  // namespace kvw
