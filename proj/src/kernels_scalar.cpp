#include "branchmc/kernels.hpp"

#include <algorithm>
#include <cmath>

// Scalar reference kernels. The 4-lane accumulator layout mirrors one AVX2
// register lane-for-lane and the lane-combine order is fixed, so these
// produce bit-identical results to the intrinsics variants.

namespace branchmc::kernels::scalar {

namespace {

constexpr std::size_t kBase = 64;

double sum_base(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += x[i];
    lane[1] += x[i + 1];
    lane[2] += x[i + 2];
    lane[3] += x[i + 3];
  }
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot_base(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] = std::fma(a[i], b[i], lane[0]);
    lane[1] = std::fma(a[i + 1], b[i + 1], lane[1]);
    lane[2] = std::fma(a[i + 2], b[i + 2], lane[2]);
    lane[3] = std::fma(a[i + 3], b[i + 3], lane[3]);
  }
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

CentralMoments moments_base(const double* x, std::size_t n, double mean) {
  double m2[4] = {0.0, 0.0, 0.0, 0.0};
  double m4[4] = {0.0, 0.0, 0.0, 0.0};
  double mx[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) {
      const double v = x[i + j];
      const double d = v - mean;
      const double d2 = d * d;
      m2[j] = std::fma(d, d, m2[j]);
      m4[j] = std::fma(d2, d2, m4[j]);
      mx[j] = std::max(mx[j], std::fabs(v));
    }
  }
  CentralMoments out;
  out.m2 = (m2[0] + m2[1]) + (m2[2] + m2[3]);
  out.m4 = (m4[0] + m4[1]) + (m4[2] + m4[3]);
  out.max_abs = std::max(std::max(mx[0], mx[1]), std::max(mx[2], mx[3]));
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
  for (std::size_t i = 0; i < n; ++i) {
    const double um = u[(i + n - 1) % n];
    const double up = u[(i + 1) % n];
    out[i] = std::fma(-2.0, u[i], um + up);
  }
}

}  // namespace branchmc::kernels::scalar
