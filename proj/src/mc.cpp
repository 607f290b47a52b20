#include "branchmc/mc.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace branchmc {

Estimate summarize(std::span<const double> values, std::size_t n_truncated) {
  Estimate est;
  est.n_truncated = n_truncated;

  std::vector<double> finite;
  const double* data = values.data();
  std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) {
      // Slow path: compact the finite samples, preserving order.
      finite.reserve(n);
      finite.assign(values.begin(), values.begin() + i);
      for (std::size_t j = i; j < n; ++j) {
        if (std::isfinite(values[j]))
          finite.push_back(values[j]);
        else
          ++est.n_nonfinite;
      }
      data = finite.data();
      n = finite.size();
      break;
    }
  }

  est.n_samples = values.size();
  if (n == 0) return est;

  est.mean = kernels::reduce_sum(data, n) / static_cast<double>(n);
  const auto mom = kernels::reduce_central_moments(data, n, est.mean);
  est.max_abs = mom.max_abs;
  if (n >= 2 && mom.m2 > 0.0) {
    const double var = mom.m2 / static_cast<double>(n - 1);
    est.stderr_ = std::sqrt(var / static_cast<double>(n));
    const double m2n = mom.m2 / static_cast<double>(n);
    est.excess_kurtosis =
        mom.m4 / static_cast<double>(n) / (m2n * m2n) - 3.0;
  }
  return est;
}

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("BRANCHMC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  if (requested >= 1) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

}  // namespace branchmc
