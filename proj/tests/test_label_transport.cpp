#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "branchmc/label_transport.hpp"
#include "branchmc/rng.hpp"

using namespace branchmc;

TEST_CASE("weight formulas: direct values") {
  CHECK(first_derivative_weight(0.3 * 0.1, 0.3, 1.0, 0.1) == 0.0);
  CHECK(first_derivative_weight(2.0, 0.0, 1.0, 1.0) == 2.0);
  CHECK(second_derivative_weight(0.0, 0.0, 1.0, 1.0) == -1.0);
  CHECK_THROWS_AS(first_derivative_weight(1.0, 0.0, 0.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(second_derivative_weight(1.0, 0.0, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("weight moments against Gaussian closed forms") {
  const double b = 0.4, sigma = 1.3, dt = 0.2;
  const double drift = b * dt, sd = std::sqrt(sigma * dt);
  RngStream rng(1, 0);
  const int n = 400000;
  double m1 = 0, m1w = 0, m2 = 0, m2w2 = 0;
  for (int i = 0; i < n; ++i) {
    const double w = drift + sd * rng.normal();
    const double c = w - drift;
    m1 += first_derivative_weight(w, b, sigma, dt);
    m1w += first_derivative_weight(w, b, sigma, dt) * c;
    m2 += second_derivative_weight(w, b, sigma, dt);
    m2w2 += second_derivative_weight(w, b, sigma, dt) * c * c;
  }
  const double inv_n = 1.0 / n;
  // E[w1] = 0, E[w1 (W - b dt)] = 1, E[w2] = 0, E[w2 (W - b dt)^2] = 2.
  CHECK(std::fabs(m1 * inv_n) < 3.0 / std::sqrt(sigma * dt * n));
  CHECK(m1w * inv_n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::fabs(m2 * inv_n) < 3.0 * std::sqrt(2.0 / (sigma * dt * sigma * dt * n)));
  CHECK(m2w2 * inv_n == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("derivative estimates hit the exact finite-dt targets") {
  // The estimator is unbiased for the derivative of the heat-smoothed
  // function, i.e. heat_evolved(h, sigma dt).derivative(k, x0 + b dt).
  struct Case {
    InitialCondition h;
    int order;
    double x0, b, sigma, dt;
  };
  const Case cases[] = {
      {InitialCondition::polynomial({0, 0, 0, 1}), 1, 1.0, 0.0, 1.0, 0.1},
      {InitialCondition::sine(1, 1, 0), 1, 0.0, 0.0, 1.0, 0.01},
      {InitialCondition::polynomial({0, 0, 1}), 2, 0.7, 1.0, 0.5, 0.05},
      {InitialCondition::gaussian(1.0, 0.3, 0.8), 2, 0.0, 0.0, 2.0, 0.02},
  };
  for (const auto& c : cases) {
    DiffusionParams p;
    p.b_bar = c.b;
    p.sigma_bar = c.sigma;
    p.dt_path = 1.0;  // unused by the one-step estimator
    const auto est = estimate_derivative(c.order, c.h, c.x0, p, c.dt, 400000,
                                         77, 0);
    const double target =
        c.h.heat_evolved(c.sigma * c.dt).derivative(c.order, c.x0 + c.b * c.dt);
    INFO(c.h.describe(), " order ", c.order, " est ", est.mean, " target ",
         target);
    CHECK(std::fabs(est.mean - target) <= 3.0 * est.stderr_);
  }

  // x^3 case: the finite-dt target is 3 x0^2 + 3 dt, approaching 3 as dt->0.
  const auto cubic = InitialCondition::polynomial({0, 0, 0, 1});
  CHECK(cubic.heat_evolved(0.1).derivative(1, 1.0) ==
        doctest::Approx(3.0 + 3.0 * 0.1).epsilon(1e-13));

  const auto flat = estimate_derivative(
      1, InitialCondition::constant(4.0), 0.0,
      DiffusionParams{1.0, 0.0, 1.0}, 0.05, 100000, 78, 0);
  CHECK(std::fabs(flat.mean) <= 3.0 * flat.stderr_);
}

TEST_CASE("finite-dt bias shrinks linearly in dt") {
  // Sine with k = 3 has a large smoothing bias exp(-k^2 sigma dt / 2) - 1,
  // so the O(dt) slope is visible far above the Monte Carlo noise.
  const auto h = InitialCondition::sine(1.0, 3.0, 0.0);
  DiffusionParams p;
  p.sigma_bar = 1.0;
  const double exact = h.derivative(1, 0.0);  // 3
  std::vector<double> errors;
  for (const double dt : {0.1, 0.05, 0.025}) {
    const auto est = estimate_derivative(1, h, 0.0, p, dt, 400000, 79, 0);
    errors.push_back(std::fabs(est.mean - exact));
  }
  CHECK(errors[0] / errors[1] > 1.5);
  CHECK(errors[0] / errors[1] < 2.5);
  CHECK(errors[1] / errors[2] > 1.5);
  CHECK(errors[1] / errors[2] < 2.5);
}

TEST_CASE("shortcut consistency for constant-coefficient transport") {
  DiffusionParams p;
  p.sigma_bar = 2.0;

  // Sine, first derivative: exact is e^{-sigma t/2} cos at the origin.
  auto rep = shortcut_consistency_check(InitialCondition::sine(1, 1, 0), 1, 0.5,
                                        p, 200000, 80, 0);
  CHECK(rep.exact == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(rep.diff <= 3.0 * rep.shortcut.stderr_);

  // Linear data: the derivative is constant, both sides exact.
  rep = shortcut_consistency_check(InitialCondition::polynomial({0.3, 1.7}), 1,
                                   0.4, p, 1000, 81, 1);
  CHECK(rep.shortcut.mean == doctest::Approx(1.7).epsilon(1e-14));
  CHECK(rep.shortcut.stderr_ <= 1e-15);
  CHECK(rep.diff < 1e-12);

  // Gaussian bump, second derivative.
  rep = shortcut_consistency_check(InitialCondition::gaussian(1.0, 0.5, 0.6), 2,
                                   0.25, p, 200000, 82, 0);
  CHECK(rep.diff <= 3.0 * rep.shortcut.stderr_);
}

TEST_CASE("nonlinear functional labels break the shortcut measurably") {
  DiffusionParams p;
  p.sigma_bar = 2.0;
  const auto ic = InitialCondition::sine(1.0, 1.0, 0.0);
  const auto rep = functional_label_gap(ic, 0.5, p, 200000, 83, 0);
  // The endpoint substitution estimates the evolved f(ic)...
  CHECK(std::fabs(rep.endpoint_mc.mean - rep.evolved_f) <=
        3.0 * rep.endpoint_mc.stderr_);
  // ...which is measurably not f of the evolved solution.
  CHECK(rep.gap > 3.0 * rep.endpoint_mc.stderr_);
}
