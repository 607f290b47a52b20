#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "branchmc/oracles.hpp"
#include "branchmc/phi4.hpp"

using namespace branchmc;

namespace {

GridSpec default_grid(double t_max = 0.5, std::size_t nt = 32) {
  GridSpec g;
  g.x_min = 0.0;
  g.x_max = 6.283185307179586;
  g.nx = 64;
  g.t_max = t_max;
  g.nt = nt;
  return g;
}

}  // namespace

TEST_CASE("db2_spec: equal thirds, weight magnitude 3, unbiasedness") {
  const GridSpec g = default_grid();
  Db2Params params;
  const auto spec = db2_spec(params, g);
  CHECK(spec.clock_rate == 1.0);
  REQUIRE(spec.rules.size() == 3);
  for (const auto& r : spec.rules) {
    CHECK(r.probability == doctest::Approx(1.0 / 3.0));
    // p * |w| * rate reproduces the unit coefficient of each term.
    CHECK(r.probability * std::fabs(r.weight) * spec.clock_rate ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(spec.rules[0].offspring == 3);
  CHECK(spec.rules[0].weight == -3.0);
  CHECK(spec.rules[1].offspring == 1);
  CHECK(spec.rules[1].weight == 3.0);  // added-back linear term, +1 coefficient
  CHECK(spec.rules[2].offspring == 0);
  CHECK(spec.rules[2].weight == 3.0);  // +xi literal sign
  CHECK(spec.rules[2].samples_noise);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("dimension guard") {
  Db2Params params;
  params.dimension = 2;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}

TEST_CASE("t = 0 returns the initial value") {
  const GridSpec g = default_grid();
  const auto noise = NoiseRealization::build(g, 41);
  Db2Params params;
  params.t = 0.0;
  params.x = 1.1;
  const auto ic = InitialCondition::sine(0.7, 1.0, 0.0);
  const auto est = db2_estimate(params, ic, noise, NoiseMode::FixedRealization,
                                50, 42, 1);
  CHECK(est.mean == doctest::Approx(ic.value(1.1)).epsilon(1e-14));
  CHECK(est.stderr_ <= 1e-15);
}

TEST_CASE("constant data, zero noise: the cubic ODE closed form") {
  const GridSpec g = default_grid();
  const auto zeros = NoiseRealization::zeros(g);
  Db2Params params;
  params.t = 0.25;
  const double a = 0.5;
  const auto est = db2_estimate(params, InitialCondition::constant(a), zeros,
                                NoiseMode::FixedRealization, 100000, 43, 0);
  const double target = a / std::sqrt(1.0 + 2.0 * a * a * params.t);
  CHECK(target == doctest::Approx(0.4714).epsilon(1e-4));
  CHECK(std::fabs(est.mean - target) <= std::max(3.0 * est.stderr_, 1e-3));
}

TEST_CASE("sine data, zero noise: matches the finite-difference oracle") {
  GridSpec g = default_grid();
  g.nx = 256;
  const auto zeros = NoiseRealization::zeros(g);
  Db2Params params;
  params.t = 0.25;
  params.x = 1.9;
  const auto ic = InitialCondition::sine(0.2, 1.0, 0.0);
  const auto est = db2_estimate(params, ic, zeros, NoiseMode::FixedRealization,
                                100000, 44, 0);

  oracles::FdOptions fopt;
  fopt.equation = oracles::FdEquation::Phi4Noiseless;
  fopt.t_end = params.t;
  const auto fd = oracles::fd_integrate(fopt, ic, g);
  const double oracle = fd.value_at(params.x);
  INFO("mc ", est.mean, " fd ", oracle, " stderr ", est.stderr_);
  CHECK(std::fabs(est.mean - oracle) <= std::max(3.0 * est.stderr_, 1e-3));
}

TEST_CASE("structural sign rule over many trees") {
  // |F| = 3^{#events} |product of leaves|, the sign carried by the cube
  // branchings alone (continuation and noise both couple with +3 under the
  // +xi convention).
  const GridSpec g = default_grid(1.0, 64);
  const auto noise = NoiseRealization::build(g, 45);
  Db2Params params;
  params.t = 0.75;
  const auto spec = db2_spec(params, g);
  const auto ic = InitialCondition::sine(0.5, 1.0, 0.4);

  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    RngStream rng(46, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.4}, noise, NoiseMode::FixedRealization, rng);
    if (tree.truncated) continue;
    const auto v = evaluate(tree, ic);
    std::size_t cubes = 0;
    for (const auto& e : tree.events)
      if (spec.rules[static_cast<std::size_t>(e.rule)].offspring == 3) ++cubes;
    double leaves = 1.0;
    for (const auto& leaf : tree.ic_leaves) leaves *= ic.value(leaf.x);
    for (const auto& leaf : tree.noise_leaves) leaves *= leaf.value;
    const double expected = std::pow(3.0, double(tree.events.size())) *
                            ((cubes % 2) ? -1.0 : 1.0) * leaves;
    if (v.value != 0.0) {
      CHECK(v.value == doctest::Approx(expected).epsilon(1e-12));
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("odd symmetry: negating the data negates the estimate exactly") {
  const GridSpec g = default_grid();
  const auto zeros = NoiseRealization::zeros(g);
  Db2Params params;
  params.t = 0.4;
  params.x = 0.7;
  const auto ic = InitialCondition::sine(0.6, 1.0, 0.0);
  const auto neg = InitialCondition::sine(-0.6, 1.0, 0.0);
  const auto a = db2_estimate(params, ic, zeros, NoiseMode::FixedRealization,
                              20000, 47, 0);
  const auto b = db2_estimate(params, neg, zeros, NoiseMode::FixedRealization,
                              20000, 47, 0);
  CHECK(a.mean == -b.mean);  // bitwise, mirrored streams
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("restricted first-order mean reproduces the once-iterated equation") {
  // Against the clocked integral form: phi_1 = e^-t H_t ic
  // - int_0^t e^-s H_s [phi_0^3 - phi_0 - xi](t-s) ds with phi_0 the damped
  // heat term, assembled from the semigroup weights and a trapezoid rule.
  const GridSpec g = default_grid(0.25, 16);
  const auto noise = NoiseRealization::build(g, 48);
  Db2Params params;
  params.t = 0.25;
  params.x = 1.2;
  const auto ic = InitialCondition::sine(0.5, 1.0, 0.0);
  const auto spec = db2_spec(params, g);

  const std::size_t n = 200000;
  std::vector<double> values(n);
  parallel_for_samples(n, 0, [&](std::size_t i) {
    RngStream rng(49, i);
    const auto tree = grow_tree(spec, {params.t, params.x}, noise,
                                NoiseMode::FixedRealization, rng);
    const auto v = evaluate(tree, ic);
    values[i] = v.n_events <= 1 ? v.value : 0.0;
  });
  const auto restricted = summarize(values);

  const std::size_t nx = g.nx;
  const double dt = g.dt_cell();
  const auto levels = static_cast<std::size_t>(std::llround(params.t / dt));
  std::vector<double> ic_vec(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    const double xj = g.x_min + (double(j) + 0.5) * g.dx();
    ic_vec[j] = ic.value(xj);
  }
  // phi_0 at physical time m*dt on the grid.
  const auto phi0 = [&](std::size_t m) {
    const auto w = oracles::heat_weights(g, params.sigma_bar, double(m) * dt);
    std::vector<double> out(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < nx; ++j) out[i] += w[i * nx + j] * ic_vec[j];
    const double decay = std::exp(-double(m) * dt);
    for (double& v : out) v *= decay;
    return out;
  };
  std::vector<double> first = phi0(levels);
  for (std::size_t l = 0; l <= levels; ++l) {
    const std::size_t m = levels - l;  // physical time index of the integrand
    const auto u = phi0(m);
    const auto xi_row = noise.cells().subspan(std::min(m, g.nt - 1) * nx, nx);
    std::vector<double> kern(nx);
    for (std::size_t j = 0; j < nx; ++j)
      kern[j] = u[j] * u[j] * u[j] - u[j] - xi_row[j];
    const auto w = oracles::heat_weights(g, params.sigma_bar, double(l) * dt);
    const double trap = (l == 0 || l == levels) ? 0.5 * dt : dt;
    const double decay = std::exp(-double(l) * dt);
    for (std::size_t i = 0; i < nx; ++i) {
      double conv = 0.0;
      for (std::size_t j = 0; j < nx; ++j) conv += w[i * nx + j] * kern[j];
      first[i] -= trap * decay * conv;
    }
  }
  oracles::GridFunction oracle;
  oracle.x_min = g.x_min;
  oracle.x_max = g.x_max;
  oracle.nx = nx;
  oracle.values = first;
  const double target = oracle.value_at(params.x);

  INFO("restricted ", restricted.mean, " picard-1 ", target, " stderr ",
       restricted.stderr_);
  CHECK(std::fabs(restricted.mean - target) <= 3.0 * restricted.stderr_);
}

TEST_CASE("kurtosis diagnostic surfaces heavy tails") {
  const GridSpec g = default_grid();
  const auto noise = NoiseRealization::build(g, 50);
  Db2Params params;
  params.t = 0.5;
  const auto est = db2_estimate(params, InitialCondition::constant(0.8), noise,
                                NoiseMode::FixedRealization, 20000, 51, 0);
  CHECK(est.excess_kurtosis > 3.0);
  CHECK(est.max_abs > 10.0 * std::fabs(est.mean));
}
