#pragma once

#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

namespace kext {

/// Splits [begin, end) into at most `jobs` contiguous chunks and runs
/// fn(chunk_begin, chunk_end, chunk_index) on worker threads. jobs <= 1 runs
/// inline. Callers are responsible for order-independent merging; every
/// reduction in this project is a min/OR/sum, so chunking never changes
/// results.
template <class Fn>
void parallel_chunks(std::uint64_t begin, std::uint64_t end, int jobs, Fn&& fn) {
  const std::uint64_t total = end > begin ? end - begin : 0;
  if (jobs <= 1 || total < 2) {
    if (total > 0) fn(begin, end, 0);
    return;
  }
  const std::uint64_t n_chunks = std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs), total);
  const std::uint64_t chunk = total / n_chunks;
  const std::uint64_t extra = total % n_chunks;
  std::vector<std::thread> workers;
  workers.reserve(n_chunks);
  std::uint64_t at = begin;
  for (std::uint64_t i = 0; i < n_chunks; ++i) {
    std::uint64_t size = chunk + (i < extra ? 1 : 0);
    std::uint64_t chunk_begin = at, chunk_end = at + size;
    at = chunk_end;
    workers.emplace_back([&fn, chunk_begin, chunk_end, i] {
      fn(chunk_begin, chunk_end, static_cast<int>(i));
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace kext
