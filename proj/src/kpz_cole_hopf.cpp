#include "branchmc/kpz_cole_hopf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace branchmc {

namespace {

DiffusionParams resolve_diffusion(double sigma_bar, double dt_path,
                                  const GridSpec& grid) {
  DiffusionParams p;
  p.sigma_bar = sigma_bar;
  p.b_bar = 0.0;
  p.dt_path = dt_path > 0.0 ? dt_path : recommended_dt_path(grid, sigma_bar);
  return p;
}

}  // namespace

BranchingSpec z_spec(const KpzChParams& params, const GridSpec& grid) {
  BranchingSpec spec;
  spec.clock_rate = 1.0;
  spec.diffusion = resolve_diffusion(params.sigma_bar, params.dt_path, grid);
  spec.rules.push_back({"noise", 1.0, /*offspring=*/1, /*weight=*/params.lambda,
                        /*samples_noise=*/true, /*label_increment=*/0});
  return spec;
}

Estimate z_branching_estimate(const KpzChParams& params,
                              const InitialCondition& ic_z,
                              const NoiseRealization& noise, NoiseMode mode,
                              std::size_t n_samples, std::uint64_t master_seed,
                              unsigned threads) {
  if (params.t > noise.spec().t_max)
    throw std::invalid_argument("z_branching_estimate: t beyond noise horizon");
  const BranchingSpec spec = z_spec(params, noise.spec());
  return estimate(spec, {params.t, params.x}, ic_z, noise, mode, n_samples,
                  master_seed, threads);
}

Estimate z_exponential_estimate(const KpzChParams& params,
                                const InitialCondition& ic_z,
                                const NoiseRealization& noise,
                                std::size_t n_samples,
                                std::uint64_t master_seed, unsigned threads) {
  if (params.t > noise.spec().t_max)
    throw std::invalid_argument(
        "z_exponential_estimate: t beyond noise horizon");
  const DiffusionParams diffusion =
      resolve_diffusion(params.sigma_bar, params.dt_path, noise.spec());

  std::vector<double> values(n_samples);
  parallel_for_samples(n_samples, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i);
    thread_local DiffusionPath path;
    simulate_segment({params.t, params.x}, params.t, diffusion, stream, path);
    const double integral = path_noise_integral(noise, path, params.t);
    const double ic_value = ic_z.value(path.endpoint());
    const double log_mag = -params.t + params.lambda * integral;
    // exp evaluated on the log scale; ~709 is the double overflow edge
    values[i] = log_mag > 709.0 ? std::numeric_limits<double>::infinity()
                                : ic_value * std::exp(log_mag);
  });
  return summarize(values);
}

double h_from_z(double z_value, double t, double lambda) {
  if (lambda == 0.0)
    throw std::invalid_argument(
        "h_from_z: lambda == 0 has no Cole-Hopf inverse; use "
        "stochastic_heat_estimate");
  if (!(z_value > 0.0))
    throw std::domain_error("h_from_z: non-positive Z estimate");
  return (t + std::log(z_value)) / lambda;
}

Estimate h_from_z(const Estimate& z, double t, double lambda) {
  Estimate h = z;
  h.mean = h_from_z(z.mean, t, lambda);
  h.stderr_ = z.stderr_ / (std::fabs(lambda) * z.mean);
  h.max_abs = std::fabs(h.mean);
  h.excess_kurtosis = 0.0;
  return h;
}

Estimate stochastic_heat_estimate(double t, double x,
                                  const InitialCondition& ic_h,
                                  const NoiseRealization& noise,
                                  const DiffusionParams& diffusion,
                                  std::size_t n_samples,
                                  std::uint64_t master_seed, unsigned threads,
                                  NoiseSign xi_sign) {
  if (t > noise.spec().t_max)
    throw std::invalid_argument(
        "stochastic_heat_estimate: t beyond noise horizon");
  diffusion.validate();
  const double sign = noise_sign_factor(xi_sign);

  std::vector<double> values(n_samples);
  parallel_for_samples(n_samples, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i);
    thread_local DiffusionPath path;
    simulate_segment({t, x}, t, diffusion, stream, path);
    const double integral =
        t > 0.0 ? path_noise_integral(noise, path, t) : 0.0;
    values[i] = ic_h.value(path.endpoint()) + sign * integral;
  });
  return summarize(values);
}

}  // namespace branchmc
