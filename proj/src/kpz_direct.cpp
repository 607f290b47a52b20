#include "branchmc/kpz_direct.hpp"

#include <cmath>
#include <stdexcept>

#include "branchmc/kpz_cole_hopf.hpp"

namespace branchmc {

void Db1Params::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("Db1Params: mu must be > 0");
  if (lambda < 0.0)
    throw std::invalid_argument("Db1Params: lambda must be >= 0");
  if (t < 0.0) throw std::invalid_argument("Db1Params: negative t");
}

BranchingSpec db1_spec(const Db1Params& params, const GridSpec& grid) {
  params.validate();
  const double total = params.lambda + params.mu + 1.0;
  const double g = params.gamma();

  BranchingSpec spec;
  spec.clock_rate = params.mu;
  spec.diffusion.sigma_bar = params.sigma_bar;
  spec.diffusion.b_bar = 0.0;
  spec.diffusion.dt_path = params.dt_path > 0.0
                               ? params.dt_path
                               : recommended_dt_path(grid, params.sigma_bar);
  spec.rules.push_back({"deriv", params.lambda / total, /*offspring=*/2,
                        /*weight=*/g, /*samples_noise=*/false,
                        /*label_increment=*/1});
  spec.rules.push_back({"continue", params.mu / total, /*offspring=*/1,
                        /*weight=*/g, /*samples_noise=*/false,
                        /*label_increment=*/0});
  spec.rules.push_back({"noise", 1.0 / total, /*offspring=*/0,
                        /*weight=*/noise_sign_factor(params.noise_sign) * g,
                        /*samples_noise=*/true, /*label_increment=*/0});
  return spec;
}

Estimate db1_estimate(const Db1Params& params, const InitialCondition& ic_h,
                      const NoiseRealization& noise, NoiseMode mode,
                      std::size_t n_samples, std::uint64_t master_seed,
                      unsigned threads) {
  if (params.t > noise.spec().t_max)
    throw std::invalid_argument("db1_estimate: t beyond noise horizon");
  const BranchingSpec spec = db1_spec(params, noise.spec());
  return estimate(spec, {params.t, params.x}, ic_h, noise, mode, n_samples,
                  master_seed, threads);
}

CrossCheckReport make_cross_check_report(const Estimate& direct,
                                         const Estimate& cole_hopf,
                                         double z_mean) {
  CrossCheckReport rep;
  rep.direct = direct;
  rep.cole_hopf = cole_hopf;
  rep.z_mean = z_mean;
  rep.discrepancy = std::fabs(direct.mean - cole_hopf.mean);
  rep.combined_stderr = std::sqrt(direct.stderr_ * direct.stderr_ +
                                  cole_hopf.stderr_ * cole_hopf.stderr_);
  return rep;
}

CrossCheckReport cross_check_cole_hopf(const Db1Params& params,
                                       const InitialCondition& ic_h,
                                       const NoiseRealization& noise,
                                       std::size_t n_samples,
                                       std::uint64_t master_seed,
                                       unsigned threads) {
  if (!(params.lambda > 0.0))
    throw std::invalid_argument(
        "cross_check_cole_hopf: needs lambda > 0 for the Cole-Hopf leg");

  const Estimate direct = db1_estimate(params, ic_h, noise,
                                       NoiseMode::FixedRealization, n_samples,
                                       master_seed, threads);

  // For h solving h_t = h_xx + lambda h_x^2 + sign*xi, the variable
  // Z = e^{-t} e^{lambda h} satisfies Z_t = Z_xx - Z + (sign*lambda) Z xi
  // with Z(0) = e^{lambda ic}: only the Z-process coupling carries the sign;
  // the initial data and the log recovery always use +lambda.
  KpzChParams ch;
  ch.lambda = noise_sign_factor(params.noise_sign) * params.lambda;
  ch.t = params.t;
  ch.x = params.x;
  ch.sigma_bar = params.sigma_bar;
  ch.dt_path = params.dt_path;
  const InitialCondition ic_z = ic_h.exp_scaled(params.lambda);
  const Estimate z = z_branching_estimate(ch, ic_z, noise,
                                          NoiseMode::FixedRealization,
                                          n_samples, master_seed + 1, threads);
  const Estimate h = h_from_z(z, params.t, params.lambda);
  return make_cross_check_report(direct, h, z.mean);
}

}  // namespace branchmc
