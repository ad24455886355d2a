#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace rqbc {

/// Runs body(begin, end, accumulator) over contiguous chunks of [0, count)
/// on up to hardware_concurrency threads and returns the per-chunk
/// accumulators in chunk order. Accumulate must be default constructible.
template <class Accumulator, class Body>
std::vector<Accumulator> parallel_chunks(std::uint64_t count, Body body) {
  const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(hw, count / 4096));
  std::vector<Accumulator> partial(workers);
  if (workers == 1) {
    body(std::uint64_t{0}, count, partial[0]);
    return partial;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = count * w / workers;
    const std::uint64_t end = count * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] { body(begin, end, partial[w]); });
  }
  threads.clear();
  return partial;
}

}  // namespace rqbc
