#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace msj {

/// Worker count from MSJ_THREADS, or 1 when unset or unparsable.
inline unsigned default_threads() {
  const char* env = std::getenv("MSJ_THREADS");
  if (env == nullptr) return 1;
  try {
    const long value = std::stol(env);
    return value >= 1 ? static_cast<unsigned>(value) : 1u;
  } catch (...) {
    return 1;
  }
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// split into contiguous blocks so each one is written by a single worker;
/// callers store results by index to keep output order fixed.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  const std::size_t block = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(count, lo + block);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

}  // namespace msj
