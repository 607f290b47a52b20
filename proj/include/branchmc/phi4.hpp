#pragma once

#include <cstdint>

#include "branchmc/branching.hpp"

namespace branchmc {

// Near-mean-field dynamics phi_t = Delta phi - phi^3 + xi via a unit-rate
// ternary branching process: cube into three particles, continue, or sample
// the noise, each with probability 1/3 and weight magnitude 3.
//
// Guidance: the cube rule makes trees supercritical (mean offspring 4/3)
// and the functional heavy-tailed; keep |ic| <= 1 and t <= 0.5 and watch
// the kurtosis diagnostic.
struct Db2Params {
  double t = 0.25;
  double x = 0.0;
  int dimension = 1;  // only the d = 1 lattice is implemented
  double sigma_bar = 2.0;
  NoiseSign noise_sign = NoiseSign::PlusXi;  // +xi is the equation's literal sign
  double dt_path = 0.0;

  void validate() const;
};

BranchingSpec db2_spec(const Db2Params& params, const GridSpec& grid);

Estimate db2_estimate(const Db2Params& params, const InitialCondition& ic_phi,
                      const NoiseRealization& noise, NoiseMode mode,
                      std::size_t n_samples, std::uint64_t master_seed,
                      unsigned threads = 0);

}  // namespace branchmc
