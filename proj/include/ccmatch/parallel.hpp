#pragma once

#include <Eigen/Dense>

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ccmatch {

// Splits [begin, end) into up to `threads` contiguous chunks and runs
// fn(chunk_index, chunk_begin, chunk_end) on each. Chunk boundaries depend
// only on (range, threads); callers that keep per-chunk state indexed by
// chunk_index and reduce in chunk order stay deterministic.
inline void parallel_chunks(
    Eigen::Index begin, Eigen::Index end, int threads,
    const std::function<void(int, Eigen::Index, Eigen::Index)>& fn) {
  const Eigen::Index span = end - begin;
  if (span <= 0) return;
  int chunks = threads < 1 ? 1 : threads;
  if (static_cast<Eigen::Index>(chunks) > span) chunks = static_cast<int>(span);
  if (chunks == 1) {
    fn(0, begin, end);
    return;
  }

  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> failures(static_cast<size_t>(chunks));
  const Eigen::Index base = span / chunks;
  const Eigen::Index extra = span % chunks;
  Eigen::Index cursor = begin;
  for (int c = 0; c < chunks; ++c) {
    const Eigen::Index len = base + (c < extra ? 1 : 0);
    const Eigen::Index b = cursor;
    const Eigen::Index e = cursor + len;
    cursor = e;
    workers.emplace_back([&, c, b, e] {
      try {
        fn(c, b, e);
      } catch (...) {
        failures[static_cast<size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace ccmatch
