#include "branchmc/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace branchmc::kernels {

namespace {

Backend detect() {
#if BRANCHMC_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<Backend> g_backend{detect()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
#if BRANCHMC_HAVE_AVX2_BUILD
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available on this host: " +
                                backend_name(b));
  g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

double reduce_sum(const double* x, std::size_t n) {
#if BRANCHMC_HAVE_AVX2_BUILD
  if (active_backend() == Backend::Avx2) return avx2::reduce_sum(x, n);
#endif
  return scalar::reduce_sum(x, n);
}

double reduce_dot(const double* a, const double* b, std::size_t n) {
#if BRANCHMC_HAVE_AVX2_BUILD
  if (active_backend() == Backend::Avx2) return avx2::reduce_dot(a, b, n);
#endif
  return scalar::reduce_dot(a, b, n);
}

CentralMoments reduce_central_moments(const double* x, std::size_t n,
                                      double mean) {
#if BRANCHMC_HAVE_AVX2_BUILD
  if (active_backend() == Backend::Avx2)
    return avx2::reduce_central_moments(x, n, mean);
#endif
  return scalar::reduce_central_moments(x, n, mean);
}

void lap_periodic(const double* u, std::size_t n, double* out) {
#if BRANCHMC_HAVE_AVX2_BUILD
  if (active_backend() == Backend::Avx2) {
    avx2::lap_periodic(u, n, out);
    return;
  }
#endif
  scalar::lap_periodic(u, n, out);
}

}  // namespace branchmc::kernels
