#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "branchmc/initial_condition.hpp"
#include "branchmc/noise_field.hpp"

namespace branchmc::oracles {

// Spatial grid function on the noise lattice's cell centers.
struct GridFunction {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t nx = 0;
  double time = 0.0;
  std::vector<double> values;

  double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
  double node(std::size_t i) const {
    return x_min + (static_cast<double>(i) + 0.5) * dx();
  }
  // Periodic linear interpolation between cell centers.
  double value_at(double x) const;
  void write_csv(std::ostream& os) const;  // "x,value" rows
};

struct DiffReport {
  double sup = 0.0;
  double l2 = 0.0;  // root mean square
};

DiffReport compare(const GridFunction& a, const GridFunction& b);

// Gaussian convolution (variance sigma_bar * t) by adaptive Simpson
// quadrature, absolute tolerance 1e-9. Independent of the closed-form heat
// images in InitialCondition; the two cross-check each other.
double heat_kernel_convolution(const InitialCondition& ic, double t, double x,
                               double sigma_bar);
double heat_kernel_convolution(const std::function<double(double)>& f,
                               double t, double x, double sigma_bar,
                               double extra_halfwidth = 0.0);

// Row-normalized periodic Gaussian transition weights between cell centers,
// nx x nx row-major; s is the elapsed diffusion time.
std::vector<double> heat_weights(const GridSpec& grid, double sigma_bar,
                                 double s);

enum class PicardEquation { Z, DB1, Phi4 };

struct PicardOptions {
  PicardEquation equation = PicardEquation::Z;
  InitialCondition ic;
  double t_end = 0.25;         // must sit on the noise time grid
  std::size_t n_iters = 6;
  double lambda = 0.0;
  double mu = 1.0;             // DB1 only
  NoiseSign noise_sign = NoiseSign::MinusXi;  // DB1/Phi4 noise term sign
  double sigma_bar = 2.0;
};

struct PicardDivergence : std::runtime_error {
  PicardDivergence(std::size_t iterate_, const std::string& what_)
      : std::runtime_error(what_), iterate(iterate_) {}
  std::size_t iterate;
};

struct PicardResult {
  GridFunction solution;               // at t_end
  std::vector<double> sup_diffs;       // sup|u_k - u_{k-1}| per iterate
};

// Fixed-point iteration of the integral form on the noise lattice, sharing
// the lattice noise model with the Monte Carlo estimators so that
// comparisons isolate sampling error.
PicardResult picard_iterate(const PicardOptions& opt,
                            const NoiseRealization& noise);

enum class FdEquation { KpzNoiseless, Phi4Noiseless };

struct FdOptions {
  FdEquation equation = FdEquation::KpzNoiseless;
  double lambda = 0.0;     // KPZ nonlinearity coefficient
  double sigma_bar = 2.0;  // diffusion term is (sigma_bar/2) u_xx
  double t_end = 0.25;
  double dt = 0.0;         // 0 -> 0.4 * dx^2 / (2 sigma_bar)
};

// Explicit central-difference integration of the noiseless equations on the
// grid's cell centers with periodic boundary. Throws std::invalid_argument
// on a CFL violation (dt > dx^2 / (2 sigma_bar)) and std::runtime_error on
// blow-up.
GridFunction fd_integrate(const FdOptions& opt, const InitialCondition& ic,
                          const GridSpec& grid);

}  // namespace branchmc::oracles
