#include "branchmc/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "branchmc/noise_field.hpp"

namespace branchmc {

void DiffusionParams::validate() const {
  if (!(sigma_bar > 0.0))
    throw std::invalid_argument("DiffusionParams: sigma_bar must be > 0");
  if (!(dt_path > 0.0))
    throw std::invalid_argument("DiffusionParams: dt_path must be > 0");
  if (!std::isfinite(b_bar))
    throw std::invalid_argument("DiffusionParams: b_bar must be finite");
}

ClockOutcome draw_clock(double rate, double horizon, RngStream& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("draw_clock: rate must be > 0");
  if (horizon < 0.0)
    throw std::invalid_argument("draw_clock: negative horizon");
  const double e = rng.exponential(rate);
  if (e >= horizon) return {false, horizon};
  return {true, e};
}

void simulate_segment(SpaceTimePoint start, double duration,
                      const DiffusionParams& params, RngStream& rng,
                      DiffusionPath& out) {
  params.validate();
  if (duration < 0.0)
    throw std::invalid_argument("simulate_segment: negative duration");

  out.origin = start;
  out.samples.clear();
  out.samples.push_back({0.0, start.x});
  if (duration == 0.0) return;

  const double dt = params.dt_path;
  const auto n_full = static_cast<std::size_t>(std::floor(duration / dt));
  const double step_sigma = std::sqrt(params.sigma_bar * dt);
  const double step_drift = params.b_bar * dt;

  double x = start.x;
  for (std::size_t k = 1; k <= n_full; ++k) {
    x += step_drift + step_sigma * rng.normal();
    out.samples.push_back({static_cast<double>(k) * dt, x});
  }
  const double rem = duration - static_cast<double>(n_full) * dt;
  if (rem > 1e-12 * dt) {
    x += params.b_bar * rem + std::sqrt(params.sigma_bar * rem) * rng.normal();
    out.samples.push_back({duration, x});
  } else {
    out.samples.back().s = duration;
  }
}

DiffusionPath simulate_segment(SpaceTimePoint start, double duration,
                               const DiffusionParams& params, RngStream& rng) {
  DiffusionPath path;
  simulate_segment(start, duration, params, rng, path);
  return path;
}

DiffusionParams kpz_diffusion_params() {
  DiffusionParams p;
  p.sigma_bar = 2.0;
  p.b_bar = 0.0;
  return p;
}

double recommended_dt_path(const GridSpec& grid, double sigma_bar) {
  const double dt_cell = grid.dt_cell();
  const double dx = grid.dx();
  const double raw = std::min(dt_cell, dx * dx / (4.0 * sigma_bar));
  const double k = std::ceil(dt_cell / raw - 1e-12);
  return dt_cell / k;
}

}  // namespace branchmc
