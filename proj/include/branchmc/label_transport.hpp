#pragma once

#include <cstdint>

#include "branchmc/diffusion.hpp"
#include "branchmc/initial_condition.hpp"
#include "branchmc/mc.hpp"

namespace branchmc {

// Gaussian-increment weight factors that turn endpoint function samples into
// derivative estimates: E[h(x0 + W) w_k(W)] equals the k-th spatial
// derivative of the heat-smoothed h. w is the realized increment over the
// step of length dt.
double first_derivative_weight(double w, double b_bar, double sigma_bar,
                               double dt);
double second_derivative_weight(double w, double b_bar, double sigma_bar,
                                double dt);

// Monte Carlo derivative of order 1 or 2 at x0 over one step of length dt.
// The estimator carries an O(dt) smoothing bias; the exact finite-dt target
// is heat_evolved(h, sigma_bar*dt).derivative(order, x0 + b_bar*dt).
Estimate estimate_derivative(int order, const InitialCondition& h, double x0,
                             const DiffusionParams& params, double dt,
                             std::size_t n_samples, std::uint64_t master_seed,
                             unsigned threads = 0);

// Constant-coefficient shortcut: derivatives commute with the flow, so the
// label can simply be applied to the sampled initial condition at path
// termination. Compares the shortcut Monte Carlo mean against the exact
// derivative of the closed-form semigroup image.
struct ShortcutReport {
  Estimate shortcut;  // mean of d^k ic (X_t)
  double exact = 0.0; // d^k of the heat-evolved ic at the start point
  double diff = 0.0;
};

ShortcutReport shortcut_consistency_check(const InitialCondition& ic, int order,
                                          double t,
                                          const DiffusionParams& params,
                                          std::size_t n_samples,
                                          std::uint64_t master_seed,
                                          unsigned threads = 0);

// Negative control for functional labels: evaluating a nonlinear f at the
// sampled endpoint estimates the heat evolution of f(ic), not f of the
// evolved solution. For f(h) = h^2 the report's gap quantifies how far the
// endpoint-substitution shortcut lands from f(solution); only linear f
// closes it.
struct FunctionalLabelReport {
  Estimate endpoint_mc;        // mean of ic(X_t)^2
  double f_of_solution = 0.0;  // (heat-evolved ic)^2 at the start point
  double evolved_f = 0.0;      // heat evolution of ic^2 (what the MC targets)
  double gap = 0.0;            // |endpoint_mc.mean - f_of_solution|
};

FunctionalLabelReport functional_label_gap(const InitialCondition& ic, double t,
                                           const DiffusionParams& params,
                                           std::size_t n_samples,
                                           std::uint64_t master_seed,
                                           unsigned threads = 0);

}  // namespace branchmc
