#include "branchmc/kernels.hpp"

#if BRANCHMC_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <algorithm>
#include <cmath>

// AVX2 kernels. Each one evaluates the same arithmetic DAG as the scalar
// reference (see kernels_scalar.cpp): one __m256d accumulator stands in for
// the four scalar lanes, FMA for FMA, and tails run the identical scalar
// code. Any divergence from the reference is a bug, caught by the
// equivalence tests.

namespace branchmc::kernels::avx2 {

namespace {

constexpr std::size_t kBase = 64;

inline double combine_sum(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_base(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = combine_sum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_base(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = combine_sum(acc);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

CentralMoments moments_base(const double* x, std::size_t n, double mean) {
  const __m256d vmean = _mm256_set1_pd(mean);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d vm2 = _mm256_setzero_pd();
  __m256d vm4 = _mm256_setzero_pd();
  __m256d vmx = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d d = _mm256_sub_pd(v, vmean);
    const __m256d d2 = _mm256_mul_pd(d, d);
    vm2 = _mm256_fmadd_pd(d, d, vm2);
    vm4 = _mm256_fmadd_pd(d2, d2, vm4);
    vmx = _mm256_max_pd(vmx, _mm256_andnot_pd(sign_mask, v));
  }
  alignas(32) double l2[4], l4[4], lx[4];
  _mm256_store_pd(l2, vm2);
  _mm256_store_pd(l4, vm4);
  _mm256_store_pd(lx, vmx);
  CentralMoments out;
  out.m2 = (l2[0] + l2[1]) + (l2[2] + l2[3]);
  out.m4 = (l4[0] + l4[1]) + (l4[2] + l4[3]);
  out.max_abs = std::max(std::max(lx[0], lx[1]), std::max(lx[2], lx[3]));
  for (; i < n; ++i) {
    const double v = x[i];
    const double d = v - mean;
    const double d2 = d * d;
    out.m2 = std::fma(d, d, out.m2);
    out.m4 = std::fma(d2, d2, out.m4);
    out.max_abs = std::max(out.max_abs, std::fabs(v));
  }
  return out;
}

}  // namespace

double reduce_sum(const double* x, std::size_t n) {
  if (n <= kBase) return sum_base(x, n);
  const std::size_t m = n / 2;
  return reduce_sum(x, m) + reduce_sum(x + m, n - m);
}

double reduce_dot(const double* a, const double* b, std::size_t n) {
  if (n <= kBase) return dot_base(a, b, n);
  const std::size_t m = n / 2;
  return reduce_dot(a, b, m) + reduce_dot(a + m, b + m, n - m);
}

CentralMoments reduce_central_moments(const double* x, std::size_t n,
                                      double mean) {
  if (n <= kBase) return moments_base(x, n, mean);
  const std::size_t m = n / 2;
  const CentralMoments lo = reduce_central_moments(x, m, mean);
  const CentralMoments hi = reduce_central_moments(x + m, n - m, mean);
  CentralMoments out;
  out.m2 = lo.m2 + hi.m2;
  out.m4 = lo.m4 + hi.m4;
  out.max_abs = std::max(lo.max_abs, hi.max_abs);
  return out;
}

void lap_periodic(const double* u, std::size_t n, double* out) {
  if (n == 0) return;
  if (n < 6) {
    scalar::lap_periodic(u, n, out);
    return;
  }
  const __m256d minus_two = _mm256_set1_pd(-2.0);
  out[0] = std::fma(-2.0, u[0], u[n - 1] + u[1]);
  std::size_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    const __m256d um = _mm256_loadu_pd(u + i - 1);
    const __m256d uc = _mm256_loadu_pd(u + i);
    const __m256d up = _mm256_loadu_pd(u + i + 1);
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(minus_two, uc, _mm256_add_pd(um, up)));
  }
  for (; i < n - 1; ++i) out[i] = std::fma(-2.0, u[i], u[i - 1] + u[i + 1]);
  out[n - 1] = std::fma(-2.0, u[n - 1], u[n - 2] + u[0]);
}

}  // namespace branchmc::kernels::avx2

#endif  // BRANCHMC_HAVE_AVX2_BUILD
