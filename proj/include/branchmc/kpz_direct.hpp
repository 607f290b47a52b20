#pragma once

#include <cstdint>

#include "branchmc/branching.hpp"

namespace branchmc {

// Direct KPZ solver: a rate-mu clock obtained by adding and subtracting
// mu*h, with three branch types (gradient-squared, straight continuation,
// noise sampling) and derivative labels transported to the initial
// condition.
struct Db1Params {
  double lambda = 0.1;
  double mu = 1.0;
  double t = 0.25;
  double x = 0.0;
  double sigma_bar = 2.0;
  NoiseSign noise_sign = NoiseSign::MinusXi;
  double dt_path = 0.0;  // 0 -> recommended_dt_path(grid, sigma_bar)

  double gamma() const { return (lambda + mu + 1.0) / mu; }
  void validate() const;
};

// Rate mu; probabilities proportional to (lambda, mu, 1) with per-event
// weight gamma = (lambda+mu+1)/mu, the unique assignment for which
// probability * weight * rate reproduces the integrand coefficients
// (lambda, mu, 1) term by term. The gradient rule spawns two offspring and
// adds one derivative order to each.
BranchingSpec db1_spec(const Db1Params& params, const GridSpec& grid);

Estimate db1_estimate(const Db1Params& params, const InitialCondition& ic_h,
                      const NoiseRealization& noise, NoiseMode mode,
                      std::size_t n_samples, std::uint64_t master_seed,
                      unsigned threads = 0);

// Side-by-side run of the direct process and the Cole-Hopf pipeline
// (Z-process on ic_z = exp(lambda * ic_h), then h = (t + log Z)/lambda) at
// the same point against the same noise realization.
struct CrossCheckReport {
  Estimate direct;       // h from the labelled process
  Estimate cole_hopf;    // h recovered from the Z estimate
  double z_mean = 0.0;
  double discrepancy = 0.0;      // |direct.mean - cole_hopf.mean|
  double combined_stderr = 0.0;  // sqrt(se_direct^2 + se_ch^2)
};

CrossCheckReport cross_check_cole_hopf(const Db1Params& params,
                                       const InitialCondition& ic_h,
                                       const NoiseRealization& noise,
                                       std::size_t n_samples,
                                       std::uint64_t master_seed,
                                       unsigned threads = 0);

CrossCheckReport make_cross_check_report(const Estimate& direct,
                                         const Estimate& cole_hopf,
                                         double z_mean);

}  // namespace branchmc
