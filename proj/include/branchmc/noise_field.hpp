#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "branchmc/diffusion.hpp"
#include "branchmc/rng.hpp"

namespace branchmc {

// Space-time lattice for the white-noise realization: nx cells over
// [x_min, x_max), nt cells over [0, t_max].
struct GridSpec {
  double x_min = 0.0;
  double x_max = 6.283185307179586;
  std::size_t nx = 64;
  double t_max = 1.0;
  std::size_t nt = 64;

  double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
  double dt_cell() const { return t_max / static_cast<double>(nt); }
  double length() const { return x_max - x_min; }
  void validate() const;  // throws std::invalid_argument
};

enum class BoundaryPolicy { PeriodicInX, ZeroOutside };

// Which probability space drives the noise sampled at branching events:
// FixedRealization reads the frozen lattice (one realization of the driving
// noise), ResampledPerEvent draws a fresh independent Gaussian per event
// (the product space of diffusion/branching and noise).
enum class NoiseMode { FixedRealization, ResampledPerEvent };

// Sign convention for the noise term of the target equation; the two are
// equal in law, but fixing one makes cross-pipeline comparisons exact.
enum class NoiseSign { MinusXi, PlusXi };

inline double noise_sign_factor(NoiseSign s) {
  return s == NoiseSign::MinusXi ? -1.0 : 1.0;
}

// White noise discretized as iid N(0, 1/(dx*dt_cell)) cell values, a pure
// function of (spec, seed, boundary policy). Lookups are piecewise constant
// on cells (lower-inclusive floor indexing); interpolation would correlate
// nearby samplings and is deliberately avoided.
class NoiseRealization {
 public:
  static NoiseRealization build(const GridSpec& spec, std::uint64_t seed,
                                BoundaryPolicy policy = BoundaryPolicy::PeriodicInX);
  static NoiseRealization zeros(const GridSpec& spec,
                                BoundaryPolicy policy = BoundaryPolicy::PeriodicInX);
  static NoiseRealization constant(const GridSpec& spec, double value,
                                   BoundaryPolicy policy = BoundaryPolicy::PeriodicInX);

  const GridSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  BoundaryPolicy boundary() const { return policy_; }
  std::span<const double> cells() const { return cells_; }
  double cell(std::size_t row, std::size_t col) const {
    return cells_[row * spec_.nx + col];
  }
  // Standard deviation of one cell value, 1/sqrt(dx*dt_cell).
  double cell_sigma() const;

  // Cell containing (t, x); nullopt when x is outside a ZeroOutside domain.
  // Throws std::domain_error for t outside [0, t_max] (that is a clock or
  // horizon bug, not a boundary condition).
  std::optional<std::pair<std::size_t, std::size_t>> cell_index(double t,
                                                                double x) const;

  double at(double t, double x) const;

  // Header + row-major float64 cells, for cross-implementation comparison.
  void dump(std::ostream& os) const;
  static NoiseRealization load(std::istream& is);

 private:
  NoiseRealization(GridSpec spec, std::uint64_t seed, BoundaryPolicy policy)
      : spec_(spec), seed_(seed), policy_(policy) {}

  GridSpec spec_;
  std::uint64_t seed_ = 0;
  BoundaryPolicy policy_ = BoundaryPolicy::PeriodicInX;
  std::vector<double> cells_;
};

// Noise sampled at a branching event under the given mode.
double event_noise(const NoiseRealization& noise, NoiseMode mode, double t,
                   double x, RngStream& rng);

// Left-endpoint Riemann sum of the cell field along the path:
// sum_k xi(t_origin - s_k, x_k) * (s_{k+1} - s_k). Requires
// path.duration() <= t_origin <= t_max.
double path_noise_integral(const NoiseRealization& noise,
                           const DiffusionPath& path, double t_origin);

}  // namespace branchmc
