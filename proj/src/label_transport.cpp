#include "branchmc/label_transport.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "branchmc/oracles.hpp"
#include "branchmc/rng.hpp"

namespace branchmc {

double first_derivative_weight(double w, double b_bar, double sigma_bar,
                               double dt) {
  const double denom = sigma_bar * dt;
  if (!(denom > 0.0))
    throw std::invalid_argument("first_derivative_weight: sigma_bar*dt <= 0");
  return (w - b_bar * dt) / denom;
}

double second_derivative_weight(double w, double b_bar, double sigma_bar,
                                double dt) {
  const double denom = sigma_bar * dt;
  if (!(denom > 0.0))
    throw std::invalid_argument("second_derivative_weight: sigma_bar*dt <= 0");
  const double centered = w - b_bar * dt;
  return (centered * centered - denom) / (denom * denom);
}

Estimate estimate_derivative(int order, const InitialCondition& h, double x0,
                             const DiffusionParams& params, double dt,
                             std::size_t n_samples, std::uint64_t master_seed,
                             unsigned threads) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("estimate_derivative: order must be 1 or 2");
  if (!(dt > 0.0))
    throw std::invalid_argument("estimate_derivative: dt must be > 0");
  const double drift = params.b_bar * dt;
  const double sd = std::sqrt(params.sigma_bar * dt);

  std::vector<double> values(n_samples);
  parallel_for_samples(n_samples, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i);
    const double w = drift + sd * stream.normal();
    const double weight =
        order == 1 ? first_derivative_weight(w, params.b_bar, params.sigma_bar, dt)
                   : second_derivative_weight(w, params.b_bar, params.sigma_bar, dt);
    values[i] = h.value(x0 + w) * weight;
  });
  return summarize(values);
}

ShortcutReport shortcut_consistency_check(const InitialCondition& ic, int order,
                                          double t,
                                          const DiffusionParams& params,
                                          std::size_t n_samples,
                                          std::uint64_t master_seed,
                                          unsigned threads) {
  if (order < 1 || order > 2)
    throw std::invalid_argument("shortcut_consistency_check: order 1 or 2");
  const double x0 = 0.0;
  const double drift = params.b_bar * t;
  const double sd = std::sqrt(params.sigma_bar * t);

  std::vector<double> values(n_samples);
  parallel_for_samples(n_samples, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i);
    values[i] = ic.derivative(order, x0 + drift + sd * stream.normal());
  });

  ShortcutReport rep;
  rep.shortcut = summarize(values);
  rep.exact = ic.heat_evolved(params.sigma_bar * t)
                  .derivative(order, x0 + drift);
  rep.diff = std::fabs(rep.shortcut.mean - rep.exact);
  return rep;
}

FunctionalLabelReport functional_label_gap(const InitialCondition& ic, double t,
                                           const DiffusionParams& params,
                                           std::size_t n_samples,
                                           std::uint64_t master_seed,
                                           unsigned threads) {
  const double x0 = 0.0;
  const double drift = params.b_bar * t;
  const double sd = std::sqrt(params.sigma_bar * t);

  std::vector<double> values(n_samples);
  parallel_for_samples(n_samples, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i);
    const double v = ic.value(x0 + drift + sd * stream.normal());
    values[i] = v * v;
  });

  FunctionalLabelReport rep;
  rep.endpoint_mc = summarize(values);
  const double sol = ic.heat_evolved(params.sigma_bar * t).value(x0 + drift);
  rep.f_of_solution = sol * sol;
  rep.evolved_f = oracles::heat_kernel_convolution(
      [&](double y) {
        const double v = ic.value(y);
        return v * v;
      },
      t, x0 + drift, params.sigma_bar, 20.0);
  rep.gap = std::fabs(rep.endpoint_mc.mean - rep.f_of_solution);
  return rep;
}

}  // namespace branchmc
