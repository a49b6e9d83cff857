#pragma once

// Deterministic chunked execution. Work is split into chunks whose
// boundaries depend only on the workload (never on the thread count); each
// chunk writes into its own slot and reductions walk the slots in chunk
// order, so estimates are bit-identical for 1 or 64 workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace isogeo::par {

namespace detail {
inline std::atomic<int>& thread_count_storage() {
  static std::atomic<int> count{0};  // 0 = use hardware concurrency
  return count;
}
inline thread_local bool inside_worker = false;
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_count_storage().store(n); }

inline int thread_count() {
  const int configured = detail::thread_count_storage().load();
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct ChunkRange {
  std::size_t index;  // chunk index, also the RNG sub-stream identity
  std::size_t begin;  // first item
  std::size_t count;  // number of items
};

inline std::size_t num_chunks(std::size_t total_items, std::size_t chunk_size) {
  return total_items == 0 ? 0 : (total_items + chunk_size - 1) / chunk_size;
}

// Runs fn(ChunkRange) for every chunk of [0, total_items). fn must only touch
// state owned by its chunk. Nested calls (fn itself chunking) run serially on
// the calling worker, with identical chunk boundaries either way.
template <typename Fn>
inline void for_chunks(std::size_t total_items, std::size_t chunk_size, Fn&& fn) {
  const std::size_t chunks = num_chunks(total_items, chunk_size);
  if (chunks == 0) return;
  auto run_chunk = [&](std::size_t ci) {
    const std::size_t begin = ci * chunk_size;
    const std::size_t count = std::min(chunk_size, total_items - begin);
    fn(ChunkRange{ci, begin, count});
  };
  const int workers = detail::inside_worker ? 1 : thread_count();
  if (workers <= 1 || chunks == 1) {
    for (std::size_t ci = 0; ci < chunks; ++ci) run_chunk(ci);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<std::size_t>(chunks, static_cast<std::size_t>(workers)));
  std::atomic<int> error_flag{0};
  pool.reserve(spawn);
  for (int w = 0; w < spawn; ++w) {
    pool.emplace_back([&]() {
      detail::inside_worker = true;
      for (;;) {
        const std::size_t ci = next.fetch_add(1);
        if (ci >= chunks || failed.load()) break;
        try {
          run_chunk(ci);
        } catch (...) {
          if (error_flag.exchange(1) == 0) first_error = std::current_exception();
          failed.store(true);
          break;
        }
      }
      detail::inside_worker = false;
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Convenience: one result slot per chunk, returned in chunk order.
template <typename R, typename Fn>
inline std::vector<R> map_chunks(std::size_t total_items, std::size_t chunk_size, Fn&& fn) {
  std::vector<R> results(num_chunks(total_items, chunk_size));
  for_chunks(total_items, chunk_size,
             [&](const ChunkRange& range) { results[range.index] = fn(range); });
  return results;
}

}  // namespace isogeo::par
