#pragma once

#include <cstddef>
#include <string>

namespace branchmc::kernels {

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant selected at runtime. Both variants execute the same
// arithmetic DAG (4-lane strided accumulators, one fixed lane-combine
// order, fused multiply-adds on both sides), so their results are
// bit-identical; the equivalence tests assert that, and every caller gets
// results independent of the host ISA.
//
// Reductions use a fixed pairwise tree (recursive halving down to a 64
// element base case) so that sums over sample arrays are reproducible and
// well-conditioned regardless of thread count.

struct CentralMoments {
  double m2 = 0.0;      // sum of squared deviations
  double m4 = 0.0;      // sum of fourth-power deviations
  double max_abs = 0.0; // max |x| over the raw values
};

double reduce_sum(const double* x, std::size_t n);
double reduce_dot(const double* a, const double* b, std::size_t n);
CentralMoments reduce_central_moments(const double* x, std::size_t n,
                                      double mean);

// out[i] = u[i-1] - 2 u[i] + u[i+1] with periodic indices; out must not
// alias u.
void lap_periodic(const double* u, std::size_t n, double* out);

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool backend_available(Backend b);
// Testing hook; throws std::invalid_argument if the backend is unavailable.
void force_backend(Backend b);
std::string backend_name(Backend b);

namespace scalar {
double reduce_sum(const double* x, std::size_t n);
double reduce_dot(const double* a, const double* b, std::size_t n);
CentralMoments reduce_central_moments(const double* x, std::size_t n,
                                      double mean);
void lap_periodic(const double* u, std::size_t n, double* out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define BRANCHMC_HAVE_AVX2_BUILD 1
namespace avx2 {
double reduce_sum(const double* x, std::size_t n);
double reduce_dot(const double* a, const double* b, std::size_t n);
CentralMoments reduce_central_moments(const double* x, std::size_t n,
                                      double mean);
void lap_periodic(const double* u, std::size_t n, double* out);
}  // namespace avx2
#else
#define BRANCHMC_HAVE_AVX2_BUILD 0
#endif

}  // namespace branchmc::kernels
