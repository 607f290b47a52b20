#include "branchmc/phi4.hpp"

#include <stdexcept>

namespace branchmc {

void Db2Params::validate() const {
  if (t < 0.0) throw std::invalid_argument("Db2Params: negative t");
  if (dimension != 1)
    throw std::invalid_argument(
        "Db2Params: only the d = 1 noise lattice is implemented");
}

BranchingSpec db2_spec(const Db2Params& params, const GridSpec& grid) {
  params.validate();
  BranchingSpec spec;
  spec.clock_rate = 1.0;
  spec.diffusion.sigma_bar = params.sigma_bar;
  spec.diffusion.b_bar = 0.0;
  spec.diffusion.dt_path = params.dt_path > 0.0
                               ? params.dt_path
                               : recommended_dt_path(grid, params.sigma_bar);
  // Duhamel for phi_t = (Delta - 1) phi + (phi - phi^3 + xi): the clocked
  // kernel is -3 * (1/3)(phi^3 - phi - xi), so the continuation branch
  // carries +3 (probability * weight * rate = +1, the coefficient of the
  // added-back linear term), mirroring the +mu h bookkeeping of the direct
  // KPZ process.
  const double third = 1.0 / 3.0;
  spec.rules.push_back({"cube", third, /*offspring=*/3, /*weight=*/-3.0,
                        /*samples_noise=*/false, /*label_increment=*/0});
  spec.rules.push_back({"continue", third, /*offspring=*/1, /*weight=*/3.0,
                        /*samples_noise=*/false, /*label_increment=*/0});
  spec.rules.push_back({"noise", third, /*offspring=*/0,
                        /*weight=*/noise_sign_factor(params.noise_sign) * 3.0,
                        /*samples_noise=*/true, /*label_increment=*/0});
  return spec;
}

Estimate db2_estimate(const Db2Params& params, const InitialCondition& ic_phi,
                      const NoiseRealization& noise, NoiseMode mode,
                      std::size_t n_samples, std::uint64_t master_seed,
                      unsigned threads) {
  if (params.t > noise.spec().t_max)
    throw std::invalid_argument("db2_estimate: t beyond noise horizon");
  const BranchingSpec spec = db2_spec(params, noise.spec());
  return estimate(spec, {params.t, params.x}, ic_phi, noise, mode, n_samples,
                  master_seed, threads);
}

}  // namespace branchmc
