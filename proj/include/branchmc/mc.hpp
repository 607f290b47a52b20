#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "branchmc/kernels.hpp"

namespace branchmc {

// Monte Carlo aggregate. stderr is the sample standard deviation divided by
// sqrt(n). max_abs and excess_kurtosis are heavy-tail diagnostics: the
// branching functionals have no a-priori integrability guarantee, so we
// report the tails instead of asserting convergence.
struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_truncated = 0;
  std::size_t n_nonfinite = 0;
  double max_abs = 0.0;
  double excess_kurtosis = 0.0;
};

// Aggregates a sample array with the deterministic pairwise reducers.
// Non-finite samples are dropped from the moments and counted; the order of
// the remaining samples is preserved, so the result does not depend on how
// the array was filled.
Estimate summarize(std::span<const double> values, std::size_t n_truncated = 0);

// Thread count resolution: the BRANCHMC_THREADS environment variable wins,
// then the explicit request; 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Runs body(i) for i in [0, n) over `threads` workers in contiguous chunks.
// Callers index output slots by i, which keeps results byte-identical for
// every thread count.
template <class Body>
void parallel_for_samples(std::size_t n, unsigned threads, Body&& body) {
  const unsigned t = resolve_threads(threads);
  if (t <= 1 || n < 2 * t) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (unsigned w = 0; w < t; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace branchmc
