#pragma once

#include <cstdint>

#include "branchmc/branching.hpp"

namespace branchmc {

// KPZ through the damped Cole-Hopf variable Z = e^{-t} e^{lambda h}, which
// satisfies a multiplicative-noise heat equation with unit branching clock.
struct KpzChParams {
  double lambda = 0.5;
  double t = 0.25;
  double x = 0.0;
  double sigma_bar = 2.0;
  double dt_path = 0.0;  // 0 -> recommended_dt_path(grid, sigma_bar)
};

// Unit-rate clock with a single continue-with-noise rule of weight lambda:
// every ring multiplies by lambda * xi at the branch point and the particle
// keeps diffusing.
BranchingSpec z_spec(const KpzChParams& params, const GridSpec& grid);

// Monte Carlo estimate of Z(t, x) over the branching process.
Estimate z_branching_estimate(const KpzChParams& params,
                              const InitialCondition& ic_z,
                              const NoiseRealization& noise, NoiseMode mode,
                              std::size_t n_samples, std::uint64_t master_seed,
                              unsigned threads = 0);

// Same quantity with the branching expectation resummed into an exponential
// of the path noise integral: mean over pure diffusion paths of
// e^{-t} ic_z(X_t) exp(lambda * integral). The exponent is evaluated in log
// space; overflowing samples are flagged non-finite rather than silently
// saturating.
Estimate z_exponential_estimate(const KpzChParams& params,
                                const InitialCondition& ic_z,
                                const NoiseRealization& noise,
                                std::size_t n_samples,
                                std::uint64_t master_seed,
                                unsigned threads = 0);

// h = (t + log z) / lambda. Throws std::domain_error for z <= 0 (the Monte
// Carlo Z estimate is unusable for the log) and std::invalid_argument for
// lambda == 0 (use stochastic_heat_estimate instead).
double h_from_z(double z_value, double t, double lambda);

// Delta-method lift of a Z estimate to an h estimate.
Estimate h_from_z(const Estimate& z, double t, double lambda);

// The lambda -> 0 limit: mean of ic_h(X_t) + xi_sign * path noise integral
// over pure diffusion paths.
Estimate stochastic_heat_estimate(double t, double x,
                                  const InitialCondition& ic_h,
                                  const NoiseRealization& noise,
                                  const DiffusionParams& diffusion,
                                  std::size_t n_samples,
                                  std::uint64_t master_seed,
                                  unsigned threads = 0,
                                  NoiseSign xi_sign = NoiseSign::PlusXi);

}  // namespace branchmc
