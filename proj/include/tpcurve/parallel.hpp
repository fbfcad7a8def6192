#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace tpc {

// Global thread budget for the data-parallel loops. 0 = hardware concurrency.
inline int& thread_count() {
  static int n = 0;
  return n;
}

inline int effective_threads() {
  int n = thread_count();
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

// Block-parallel map-reduce over an index range. The range is split into a
// fixed number of blocks independent of the thread count; block partials are
// combined in block order, so the result does not depend on the schedule.
//
// Map: (Index begin, Index end) -> Partial. Combine: (Acc&, const Partial&).
template <typename Index, typename Partial, typename Map, typename Combine>
Partial block_map_reduce(Index begin, Index end, Partial init, Map map, Combine combine) {
  constexpr Index kBlocks = 64;
  if (end <= begin) return init;
  const Index n = end - begin;
  const Index nblocks = std::min<Index>(kBlocks, n);
  const Index chunk = (n + nblocks - 1) / nblocks;

  std::vector<Partial> partials(static_cast<std::size_t>(nblocks), init);
  const int nthreads = std::min<int>(effective_threads(), static_cast<int>(nblocks));

  if (nthreads <= 1) {
    for (Index b = 0; b < nblocks; ++b) {
      const Index lo = begin + b * chunk;
      const Index hi = std::min(end, lo + chunk);
      partials[static_cast<std::size_t>(b)] = map(lo, hi);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        for (Index b = t; b < nblocks; b += nthreads) {
          const Index lo = begin + b * chunk;
          const Index hi = std::min(end, lo + chunk);
          partials[static_cast<std::size_t>(b)] = map(lo, hi);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  Partial acc = init;
  for (const Partial& p : partials) combine(acc, p);
  return acc;
}

// Deterministic low-discrepancy sequence on [0,1): golden-ratio rotation.
// The seed shifts the whole sequence, so a fixed seed fixes every sample set.
inline double kronecker(std::uint64_t seed, std::uint64_t k) {
  const double phi_inv = 0.6180339887498949;
  const double offset = static_cast<double>(seed % 104729u) / 104729.0;
  double v = offset + phi_inv * static_cast<double>(k + 1);
  return v - std::floor(v);
}

}  // namespace tpc
