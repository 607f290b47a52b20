#pragma once

#include <vector>

#include "branchmc/rng.hpp"

namespace branchmc {

struct GridSpec;  // noise_field.hpp

// A query point: t is the remaining physical time (>= 0), so the processes
// run in elapsed backward time s from here and hit the initial data at
// physical time t - s = 0.
struct SpaceTimePoint {
  double t = 0.0;
  double x = 0.0;
};

// sigma_bar is a variance rate: a step of length dt has Gaussian increment
// variance sigma_bar * dt (and drift b_bar * dt). The generator of the
// diffusion is therefore (sigma_bar/2) d^2/dx^2 + b_bar d/dx.
struct DiffusionParams {
  double sigma_bar = 2.0;
  double b_bar = 0.0;
  double dt_path = 1e-2;

  void validate() const;  // throws std::invalid_argument
};

struct PathSample {
  double s = 0.0;  // elapsed backward time since the segment start
  double x = 0.0;
};

struct DiffusionPath {
  SpaceTimePoint origin;
  std::vector<PathSample> samples;  // s strictly increasing, samples[0].s == 0

  double duration() const { return samples.back().s; }
  double endpoint() const { return samples.back().x; }
  double total_increment() const { return samples.back().x - samples.front().x; }
};

struct ClockOutcome {
  bool branched = false;
  double s = 0.0;  // horizon if survived, branch time in (0, horizon) if not
};

// Exponential(rate) clock against a finite horizon: survival probability is
// exp(-rate * horizon), branch density rate * exp(-rate * s).
ClockOutcome draw_clock(double rate, double horizon, RngStream& rng);

// Euler path with exact Gaussian increments; the last step is shortened so
// samples.back().s lands on `duration` exactly.
void simulate_segment(SpaceTimePoint start, double duration,
                      const DiffusionParams& params, RngStream& rng,
                      DiffusionPath& out);
DiffusionPath simulate_segment(SpaceTimePoint start, double duration,
                               const DiffusionParams& params, RngStream& rng);

// Generator d^2/dx^2 (so E[f(X_t)] solves u_t = u_xx): sigma_bar = 2, no
// drift.
DiffusionParams kpz_diffusion_params();

// Step size that resolves the noise cells along a path:
// min(dt_cell, dx^2/(4 sigma_bar)), snapped down so it divides dt_cell
// exactly. The snapping keeps path steps from straddling temporal cell
// boundaries, which would bias left-endpoint integrals of the cell field.
double recommended_dt_path(const GridSpec& grid, double sigma_bar);

}  // namespace branchmc
