#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace orbitcodes {

// Runs fn(i) for i in [begin, end) across `jobs` threads in contiguous
// chunks. Callers store results by index, so the outcome does not depend on
// the schedule. jobs == 0 means hardware concurrency.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, unsigned jobs, Fn&& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t total = end - begin;
  if (jobs <= 1 || total <= 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  if (jobs > total) jobs = static_cast<unsigned>(total);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  std::size_t chunk = (total + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    std::size_t lo = begin + w * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace orbitcodes
