#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "branchmc/branching.hpp"
#include "branchmc/kpz_cole_hopf.hpp"
#include "branchmc/kpz_direct.hpp"
#include "branchmc/phi4.hpp"

using namespace branchmc;

namespace {

GridSpec unit_grid(std::size_t nx = 64, std::size_t nt = 64, double t_max = 1.0) {
  GridSpec g;
  g.x_min = 0.0;
  g.x_max = 6.283185307179586;
  g.nx = nx;
  g.t_max = t_max;
  g.nt = nt;
  return g;
}

// Expected number of leaves of the ternary process: the renewal equation
// L(t) = e^-t + int_0^t e^-s [1/3 + (4/3) L(t-s)] ds marched on a fine time
// grid (trapezoid, implicit in the newest point).
double db2_leaf_count_oracle(double t_end) {
  const double h = 1e-4;
  const auto n = static_cast<std::size_t>(std::llround(t_end / h));
  double big_g = 0.0;     // int_0^t e^u (1/3 + 4/3 L(u)) du
  double g_prev = 1.0 / 3.0 + 4.0 / 3.0;  // integrand at u = 0, L(0) = 1
  double L = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double tk = static_cast<double>(k) * h;
    const double decay = std::exp(-tk);
    L = (decay * (1.0 + big_g + 0.5 * h * g_prev) + h / 6.0) /
        (1.0 - 2.0 * h / 3.0);
    const double g_k = std::exp(tk) * (1.0 / 3.0 + 4.0 / 3.0 * L);
    big_g += 0.5 * h * (g_prev + g_k);
    g_prev = g_k;
  }
  return L;
}

}  // namespace

TEST_CASE("spec validation") {
  const GridSpec g = unit_grid();
  BranchingSpec spec;
  spec.diffusion.dt_path = 0.01;
  spec.clock_rate = 1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // no rules

  spec.rules.push_back({"bad", 0.6, 1, 1.0, false, 0});
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // sums to 0.6

  spec.rules.push_back({"rest", 0.4, 0, 1.0, false, 0});
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // terminal no-noise

  spec.rules.back().samples_noise = true;
  CHECK_NOTHROW(spec.validate());

  // Normalization identity behind the clock: e^{-rt} + int_0^t r e^{-rs} ds = 1.
  for (double r : {0.5, 1.0, 2.0})
    for (double t : {0.1, 1.0, 3.0})
      CHECK(std::exp(-r * t) + (1.0 - std::exp(-r * t)) ==
            doctest::Approx(1.0).epsilon(1e-15));
  (void)g;
}

TEST_CASE("root at t = 0 is a single initial-condition leaf") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 1);
  KpzChParams params;
  params.lambda = 0.5;
  const auto spec = z_spec(params, g);
  RngStream rng(3, 0);
  const auto tree = grow_tree(spec, {0.0, 1.25}, noise, NoiseMode::FixedRealization, rng);
  CHECK(tree.events.empty());
  CHECK(tree.noise_leaves.empty());
  REQUIRE(tree.ic_leaves.size() == 1);
  CHECK(tree.ic_leaves[0].x == 1.25);
  CHECK(tree.ic_leaves[0].label_order == 0);
  CHECK_FALSE(tree.truncated);

  const auto v = evaluate(tree, InitialCondition::constant(5.0));
  CHECK(v.value == 5.0);
  CHECK(v.n_events == 0);
}

TEST_CASE("Z-process event count is Poisson(t)") {
  const GridSpec g = unit_grid(64, 64, 2.0);
  const auto noise = NoiseRealization::build(g, 2);
  KpzChParams params;
  params.lambda = 0.5;
  params.t = 2.0;
  const auto spec = z_spec(params, g);

  const int n = 20000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    RngStream rng(5, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.0}, noise, NoiseMode::FixedRealization, rng);
    const auto k = static_cast<double>(tree.events.size());
    CHECK(tree.noise_leaves.size() == tree.events.size());
    CHECK(tree.ic_leaves.size() == 1);  // continue-with-noise keeps one particle
    sum += k;
    sumsq += k * k;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::fabs(mean - 2.0) < 3.0 * se);
}

TEST_CASE("DB2 leaf count matches the renewal-equation oracle") {
  const double oracle = db2_leaf_count_oracle(1.0);
  // Closed form of the same renewal equation: L(t) = 2 e^{t/3} - 1.
  CHECK(oracle == doctest::Approx(2.0 * std::exp(1.0 / 3.0) - 1.0).epsilon(1e-6));

  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 3);
  Db2Params params;
  params.t = 1.0;
  const auto spec = db2_spec(params, g);

  const int n = 20000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    RngStream rng(7, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.0}, noise, NoiseMode::FixedRealization, rng);
    const auto leaves =
        static_cast<double>(tree.ic_leaves.size() + tree.noise_leaves.size());
    sum += leaves;
    sumsq += leaves * leaves;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::fabs(mean - oracle) < 3.0 * se);
}

TEST_CASE("hand-built ternary tree reproduces the -3^5 functional") {
  // One cube, two continuations, two noise samplings (five events, three
  // initial-condition leaves): against unit constant data the functional is
  // -3^5 times the product of the two noise values.
  SampleTree tree;
  tree.root = {1.0, 0.0};
  tree.events = {
      {0.1, 0.0, 0, -3.0},  // cube
      {0.3, 0.5, 1, 3.0},   // continue
      {0.4, 0.2, 1, 3.0},   // continue
      {0.5, 0.3, 2, 3.0},   // noise
      {0.7, 0.9, 2, 3.0},   // noise
  };
  tree.noise_leaves = {{0.5, 0.3, 1.7}, {0.7, 0.9, -0.6}};
  tree.ic_leaves = {{0.2, 0}, {0.8, 0}, {1.4, 0}};

  const auto v = evaluate(tree, InitialCondition::constant(1.0));
  CHECK(v.n_events == 5);
  CHECK(v.n_noise == 2);
  CHECK(v.value ==
        doctest::Approx(-std::pow(3.0, 5) * 1.7 * (-0.6)).epsilon(1e-12));
}

TEST_CASE("hand-built labelled tree reproduces the -gamma^4 functional") {
  // Four events, three derivative branchings and one noise sampling; leaves
  // carry derivative orders (2, 3, 3).
  const double gamma = 3.0;  // lambda = mu = 1
  const double xi = 0.8;
  SampleTree tree;
  tree.root = {1.0, 0.0};
  tree.events = {
      {0.2, 0.1, 0, gamma},
      {0.4, -0.2, 0, gamma},
      {0.6, 0.3, 0, gamma},
      {0.5, 0.7, 2, -gamma},  // noise sampling with the -xi convention
  };
  tree.noise_leaves = {{0.5, 0.7, xi}};
  tree.ic_leaves = {{0.4, 2}, {1.1, 3}, {-0.3, 3}};

  const auto ic = InitialCondition::sine(1.0, 1.0, 0.0);
  const auto v = evaluate(tree, ic);
  const double expected = -std::pow(gamma, 4) * xi * ic.derivative(2, 0.4) *
                          ic.derivative(3, 1.1) * ic.derivative(3, -0.3);
  CHECK(v.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(v.n_noise == 1);
}

TEST_CASE("estimate at t = 0 returns the initial value with zero stderr") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 4);
  Db2Params params;
  params.t = 0.0;
  params.x = 6.283185307179586 / 4.0;  // sin = 1
  const auto spec = db2_spec(params, g);
  const auto est = estimate(spec, {params.t, params.x},
                            InitialCondition::sine(1.0, 1.0, 0.0), noise,
                            NoiseMode::FixedRealization, 1000, 9, 2);
  CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.stderr_ == 0.0);
  CHECK(est.n_truncated == 0);
}

TEST_CASE("pure-diffusion estimate matches the heat semigroup") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 5);
  DiffusionParams diffusion;
  diffusion.sigma_bar = 1.0;
  diffusion.dt_path = recommended_dt_path(g, 1.0);
  const auto spec = BranchingSpec::pure_diffusion(diffusion);
  const auto ic = InitialCondition::sine(1.0, 1.0, 0.0);
  const double t = 0.5, x = 1.1;
  const auto est = estimate(spec, {t, x}, ic, noise,
                            NoiseMode::FixedRealization, 100000, 11, 0);
  const double target = ic.heat_evolved(1.0 * t).value(x);  // e^{-t/2} sin x
  CHECK(target == doctest::Approx(std::exp(-0.25) * std::sin(x)).epsilon(1e-12));
  CHECK(std::fabs(est.mean - target) < 3.0 * est.stderr_);
  CHECK(est.stderr_ < 0.01);
}

TEST_CASE("estimate is independent of thread count, bit for bit") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 6);
  Db2Params params;
  params.t = 0.5;
  const auto spec = db2_spec(params, g);
  const auto ic = InitialCondition::sine(0.5, 1.0, 0.0);
  const auto e1 = estimate(spec, {params.t, 0.3}, ic, noise,
                           NoiseMode::FixedRealization, 5000, 123, 1);
  const auto e4 = estimate(spec, {params.t, 0.3}, ic, noise,
                           NoiseMode::FixedRealization, 5000, 123, 4);
  CHECK(e1.mean == e4.mean);
  CHECK(e1.stderr_ == e4.stderr_);
  CHECK(e1.n_truncated == e4.n_truncated);
}

TEST_CASE("structural sign/weight bookkeeping on DB1 trees") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 7);
  Db1Params params;
  params.lambda = 1.0;
  params.mu = 1.0;
  params.t = 0.75;
  CHECK(params.gamma() == 3.0);
  const auto spec = db1_spec(params, g);
  const auto ic = InitialCondition::sine(1.0, 1.0, 0.3);

  int nontrivial = 0;
  for (int i = 0; i < 10000; ++i) {
    RngStream rng(13, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.5}, noise, NoiseMode::FixedRealization, rng);
    if (tree.truncated) continue;
    const auto v = evaluate(tree, ic);
    double leaf_product = 1.0;
    for (const auto& leaf : tree.ic_leaves)
      leaf_product *= ic.derivative(leaf.label_order, leaf.x);
    for (const auto& leaf : tree.noise_leaves) leaf_product *= leaf.value;
    const double expected =
        std::pow(params.gamma(), double(tree.events.size())) *
        ((tree.noise_leaves.size() % 2) ? -1.0 : 1.0) * leaf_product;
    if (v.value != 0.0) {
      ++nontrivial;
      CHECK(v.value == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK(nontrivial > 1000);
}

TEST_CASE("DB1 label accumulation matches the leaf-order pattern") {
  // Force derivative branchings only and check labels grow along root-to-leaf
  // paths: lambda >> mu keeps the deriv rule dominant.
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 8);
  Db1Params params;
  params.lambda = 50.0;
  params.mu = 1.0;
  params.t = 0.4;
  const auto spec = db1_spec(params, g);
  bool saw_order_2 = false;
  for (int i = 0; i < 200; ++i) {
    RngStream rng(15, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.0}, noise, NoiseMode::FixedRealization, rng);
    std::size_t deriv_events = 0;
    for (const auto& e : tree.events)
      if (spec.rules[static_cast<std::size_t>(e.rule)].offspring == 2)
        ++deriv_events;
    int max_label = 0;
    for (const auto& leaf : tree.ic_leaves)
      max_label = std::max(max_label, leaf.label_order);
    CHECK(max_label <= static_cast<int>(deriv_events));
    if (max_label >= 2) saw_order_2 = true;
  }
  CHECK(saw_order_2);
}

TEST_CASE("noise leaves land on distinct cells more often on finer grids") {
  KpzChParams params;
  params.lambda = 0.5;
  params.t = 2.0;

  const auto repeated_fraction = [&](std::size_t nx, std::size_t nt) {
    const GridSpec g = unit_grid(nx, nt, 2.0);
    const auto noise = NoiseRealization::build(g, 9);
    const auto spec = z_spec(params, g);
    int repeated = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      RngStream rng(17, i);
      const auto tree =
          grow_tree(spec, {params.t, 0.0}, noise, NoiseMode::FixedRealization, rng);
      std::set<std::pair<std::size_t, std::size_t>> cells;
      bool dup = false;
      for (const auto& leaf : tree.noise_leaves) {
        const auto idx =
            noise.cell_index(params.t - leaf.s, leaf.x).value();
        dup = dup || !cells.insert(idx).second;
      }
      repeated += dup ? 1 : 0;
    }
    return double(repeated) / n;
  };

  const double coarse = repeated_fraction(16, 32);
  const double fine = repeated_fraction(64, 128);
  CHECK(coarse > 0.01);  // the effect is visible at this resolution
  CHECK(fine < coarse);
}

TEST_CASE("event caps truncate and are reported") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 10);
  Db2Params params;
  params.t = 1.0;
  auto spec = db2_spec(params, g);
  spec.max_events = 2;

  int truncated = 0;
  for (int i = 0; i < 500; ++i) {
    RngStream rng(19, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.0}, noise, NoiseMode::FixedRealization, rng);
    CHECK(tree.events.size() <= 2);
    if (tree.truncated) ++truncated;
    const auto v = evaluate(tree, InitialCondition::constant(0.5));
    CHECK(std::isfinite(v.value));
  }
  CHECK(truncated > 0);

  const auto est = estimate(spec, {params.t, 0.0}, InitialCondition::constant(0.5),
                            noise, NoiseMode::FixedRealization, 500, 19, 2);
  CHECK(est.n_truncated == static_cast<std::size_t>(truncated));
}

TEST_CASE("label cap truncates deep derivative chains") {
  const GridSpec g = unit_grid();
  const auto noise = NoiseRealization::build(g, 11);
  Db1Params params;
  params.lambda = 50.0;
  params.mu = 1.0;
  params.t = 1.0;
  auto spec = db1_spec(params, g);
  spec.max_label_order = 1;

  int truncated = 0;
  for (int i = 0; i < 300; ++i) {
    RngStream rng(23, i);
    const auto tree =
        grow_tree(spec, {params.t, 0.0}, noise, NoiseMode::FixedRealization, rng);
    if (tree.truncated) ++truncated;
    for (const auto& leaf : tree.ic_leaves) CHECK(leaf.label_order <= 2);
  }
  CHECK(truncated > 0);
}
