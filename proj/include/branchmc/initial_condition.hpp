#pragma once

#include <string>
#include <variant>
#include <vector>

namespace branchmc {

// Closed-form initial data. Every family evaluates exactly and carries
// exact derivatives of arbitrary order, which is what lets derivative
// labels be applied to the sampled initial condition at path termination.
// All base families are also closed under the heat flow, giving exact
// semigroup images for the oracles.
//
// Conventions:
//   sine(a, k, phi)      : a * sin(k x + phi)
//   gaussian(a, c, w)    : a * exp(-(x - c)^2 / (2 w^2))
//   polynomial(c0..cn)   : sum c_i x^i
//   f.exp_scaled(s)      : x -> exp(s * f(x))   (evaluation + derivatives
//                          via the Bell recursion; no closed heat image)
class InitialCondition {
 public:
  static InitialCondition zero();
  static InitialCondition constant(double c);
  static InitialCondition sine(double amplitude, double wavenumber, double phase);
  static InitialCondition gaussian(double amplitude, double center, double width);
  static InitialCondition polynomial(std::vector<double> coeffs);
  InitialCondition exp_scaled(double scale) const;

  double value(double x) const;
  double derivative(int order, double x) const;

  // Convolution with N(0, variance) as a member of the same family.
  // Throws std::logic_error for exp_scaled wrappers.
  InitialCondition heat_evolved(double variance) const;
  bool has_closed_heat_image() const { return !exp_wrapped_; }

  std::string describe() const;

 private:
  struct Zero {};
  struct Constant {
    double c;
  };
  struct Sine {
    double a, k, phase;
  };
  struct Gaussian {
    double a, c, w;
  };
  struct Poly {
    std::vector<double> coeffs;
  };
  using Base = std::variant<Zero, Constant, Sine, Gaussian, Poly>;

  double base_value(double x) const;
  double base_derivative(int order, double x) const;

  Base base_{Zero{}};
  bool exp_wrapped_ = false;
  double exp_scale_ = 0.0;
};

}  // namespace branchmc
