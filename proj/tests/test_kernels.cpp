#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "branchmc/kernels.hpp"
#include "branchmc/rng.hpp"

using namespace branchmc;
namespace k = branchmc::kernels;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed,
                                  double scale) {
  RngStream rng(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * rng.normal() + rng.uniform();
  return v;
}

bool bits_equal(double a, double b) {
  std::uint64_t ua, ub;
  std::memcpy(&ua, &a, 8);
  std::memcpy(&ub, &b, 8);
  return ua == ub;
}

}  // namespace

TEST_CASE("scalar reducers agree with straightforward references") {
  // Accuracy sanity: against long double accumulation.
  const auto x = random_values(10007, 3, 100.0);
  long double ref = 0.0L;
  for (double v : x) ref += v;
  const double got = k::scalar::reduce_sum(x.data(), x.size());
  CHECK(std::fabs(got - double(ref)) <= 1e-9 * std::fabs(double(ref)) + 1e-12);

  const auto y = random_values(10007, 4, 1.0);
  long double dref = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    dref += (long double)x[i] * y[i];
  const double dgot = k::scalar::reduce_dot(x.data(), y.data(), x.size());
  CHECK(std::fabs(dgot - double(dref)) <=
        1e-9 * std::fabs(double(dref)) + 1e-9);

  const double mean = k::scalar::reduce_sum(x.data(), x.size()) / x.size();
  long double m2 = 0.0L, m4 = 0.0L;
  double mx = 0.0;
  for (double v : x) {
    const long double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
    mx = std::max(mx, std::fabs(v));
  }
  const auto mom = k::scalar::reduce_central_moments(x.data(), x.size(), mean);
  CHECK(mom.m2 == doctest::Approx(double(m2)).epsilon(1e-10));
  CHECK(mom.m4 == doctest::Approx(double(m4)).epsilon(1e-10));
  CHECK(mom.max_abs == mx);
}

TEST_CASE("avx2 kernels match scalar bit for bit") {
  if (!k::backend_available(k::Backend::Avx2)) {
    MESSAGE("AVX2 not available on this host; equivalence not exercised");
    return;
  }
#if BRANCHMC_HAVE_AVX2_BUILD
  // Sizes straddling the base case, vector width, and recursion splits.
  for (std::size_t n :
       {std::size_t(0), std::size_t(1), std::size_t(3), std::size_t(4),
        std::size_t(5), std::size_t(63), std::size_t(64), std::size_t(65),
        std::size_t(127), std::size_t(128), std::size_t(1000),
        std::size_t(4096), std::size_t(100001)}) {
    const auto a = random_values(n, 100 + n, 1e6);
    const auto b = random_values(n, 200 + n, 1e-3);

    CHECK(bits_equal(k::scalar::reduce_sum(a.data(), n),
                     k::avx2::reduce_sum(a.data(), n)));
    CHECK(bits_equal(k::scalar::reduce_dot(a.data(), b.data(), n),
                     k::avx2::reduce_dot(a.data(), b.data(), n)));
    const double mean = n ? k::scalar::reduce_sum(a.data(), n) / double(n) : 0;
    const auto ms = k::scalar::reduce_central_moments(a.data(), n, mean);
    const auto mv = k::avx2::reduce_central_moments(a.data(), n, mean);
    CHECK(bits_equal(ms.m2, mv.m2));
    CHECK(bits_equal(ms.m4, mv.m4));
    CHECK(bits_equal(ms.max_abs, mv.max_abs));

    if (n >= 1) {
      std::vector<double> outs(n), outv(n);
      k::scalar::lap_periodic(a.data(), n, outs.data());
      k::avx2::lap_periodic(a.data(), n, outv.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(bits_equal(outs[i], outv[i]));
    }
  }
#endif
}

TEST_CASE("dispatch honors forced backend") {
  const auto x = random_values(513, 9, 1.0);
  const k::Backend original = k::active_backend();
  k::force_backend(k::Backend::Scalar);
  const double s = k::reduce_sum(x.data(), x.size());
  CHECK(k::active_backend() == k::Backend::Scalar);
  if (k::backend_available(k::Backend::Avx2)) {
    k::force_backend(k::Backend::Avx2);
    CHECK(bits_equal(s, k::reduce_sum(x.data(), x.size())));
  }
  k::force_backend(original);
}

TEST_CASE("lap_periodic wraps correctly") {
  const std::vector<double> u = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> out(4);
  k::lap_periodic(u.data(), 4, out.data());
  CHECK(out[0] == doctest::Approx(8.0 + 2.0 - 2.0));
  CHECK(out[1] == doctest::Approx(1.0 + 4.0 - 4.0));
  CHECK(out[2] == doctest::Approx(2.0 + 8.0 - 8.0));
  CHECK(out[3] == doctest::Approx(4.0 + 1.0 - 16.0));
}
