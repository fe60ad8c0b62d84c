#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace sepsim {

// Runs `body(first, last, block)` over fixed 1024-replica blocks on up to
// `threads` workers.  The block layout is independent of the thread
// count, so per-block results merged in block order reproduce the serial
// run bit-for-bit.
inline void for_each_replica_block(
    std::int64_t replicas, int threads,
    const std::function<void(std::int64_t, std::int64_t, std::size_t)>& body) {
  constexpr std::int64_t kBlock = 1024;
  const auto blocks =
      static_cast<std::size_t>((replicas + kBlock - 1) / kBlock);
  if (threads < 1) threads = 1;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::int64_t first = static_cast<std::int64_t>(b) * kBlock;
      const std::int64_t last = std::min(replicas, first + kBlock);
      body(first, last, b);
    }
  };

  if (threads == 1 || blocks <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  const auto n_workers = std::min<std::size_t>(
      static_cast<std::size_t>(threads), blocks);
  pool.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline std::size_t replica_block_count(std::int64_t replicas) {
  return static_cast<std::size_t>((replicas + 1023) / 1024);
}

}  // namespace sepsim
