#include "branchmc/initial_condition.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace branchmc {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;

// He_n(z), probabilists' Hermite polynomial, by the three-term recurrence.
double hermite_prob(int n, double z) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = z;
  for (int m = 1; m < n; ++m) {
    const double h2 = z * h1 - static_cast<double>(m) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double double_factorial_odd(int m) {
  // (2m-1)!! = 1*3*...*(2m-1), with the empty product = 1.
  double r = 1.0;
  for (int j = 3; j <= 2 * m - 1; j += 2) r *= j;
  return m >= 1 ? r : 1.0;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j)
    r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return r;
}

constexpr int kMaxExpDerivOrder = 32;

}  // namespace

InitialCondition InitialCondition::zero() { return {}; }

InitialCondition InitialCondition::constant(double c) {
  InitialCondition ic;
  ic.base_ = Constant{c};
  return ic;
}

InitialCondition InitialCondition::sine(double amplitude, double wavenumber,
                                        double phase) {
  InitialCondition ic;
  ic.base_ = Sine{amplitude, wavenumber, phase};
  return ic;
}

InitialCondition InitialCondition::gaussian(double amplitude, double center,
                                            double width) {
  if (!(width > 0.0))
    throw std::invalid_argument("gaussian initial condition: width must be > 0");
  InitialCondition ic;
  ic.base_ = Gaussian{amplitude, center, width};
  return ic;
}

InitialCondition InitialCondition::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  InitialCondition ic;
  ic.base_ = Poly{std::move(coeffs)};
  return ic;
}

InitialCondition InitialCondition::exp_scaled(double scale) const {
  if (exp_wrapped_)
    throw std::invalid_argument("exp_scaled: nesting not supported");
  InitialCondition ic = *this;
  ic.exp_wrapped_ = true;
  ic.exp_scale_ = scale;
  return ic;
}

double InitialCondition::base_value(double x) const {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return f.c;
        } else if constexpr (std::is_same_v<T, Sine>) {
          return f.a * std::sin(f.k * x + f.phase);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double z = (x - f.c) / f.w;
          return f.a * std::exp(-0.5 * z * z);
        } else {
          double v = 0.0;
          for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it)
            v = v * x + *it;
          return v;
        }
      },
      base_);
}

double InitialCondition::base_derivative(int order, double x) const {
  if (order < 0) throw std::invalid_argument("derivative: negative order");
  if (order == 0) return base_value(x);
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Zero> || std::is_same_v<T, Constant>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Sine>) {
          return f.a * std::pow(f.k, order) *
                 std::sin(f.k * x + f.phase + kHalfPi * order);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double z = (x - f.c) / f.w;
          const double sign = (order % 2 == 0) ? 1.0 : -1.0;
          return f.a * sign * hermite_prob(order, z) *
                 std::exp(-0.5 * z * z) / std::pow(f.w, order);
        } else {
          double v = 0.0;
          const int n = static_cast<int>(f.coeffs.size());
          for (int m = n - 1; m >= order; --m) {
            double fall = 1.0;
            for (int j = 0; j < order; ++j) fall *= static_cast<double>(m - j);
            v = v * x + fall * f.coeffs[static_cast<std::size_t>(m)];
          }
          return v;
        }
      },
      base_);
}

double InitialCondition::value(double x) const {
  const double b = base_value(x);
  return exp_wrapped_ ? std::exp(exp_scale_ * b) : b;
}

double InitialCondition::derivative(int order, double x) const {
  if (!exp_wrapped_) return base_derivative(order, x);
  if (order == 0) return value(x);
  if (order > kMaxExpDerivOrder)
    throw std::invalid_argument(
        "exp_scaled derivative order beyond the supported range");
  // (e^{s g})^{(n)} = e^{s g} * B_n(s g', ..., s g^{(n)}) with B_n the
  // complete Bell polynomials, via B_{n+1} = sum C(n,i) B_{n-i} a_{i+1}.
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  for (int j = 1; j <= order; ++j)
    a[static_cast<std::size_t>(j)] = exp_scale_ * base_derivative(j, x);
  std::vector<double> bell(static_cast<std::size_t>(order) + 1, 0.0);
  bell[0] = 1.0;
  for (int n = 0; n < order; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i)
      s += binomial(n, i) * bell[static_cast<std::size_t>(n - i)] *
           a[static_cast<std::size_t>(i + 1)];
    bell[static_cast<std::size_t>(n + 1)] = s;
  }
  return value(x) * bell[static_cast<std::size_t>(order)];
}

InitialCondition InitialCondition::heat_evolved(double variance) const {
  if (exp_wrapped_)
    throw std::logic_error("heat_evolved: no closed form for exp_scaled data");
  if (variance < 0.0)
    throw std::invalid_argument("heat_evolved: negative variance");
  if (variance == 0.0) return *this;
  return std::visit(
      [&](const auto& f) -> InitialCondition {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return zero();
        } else if constexpr (std::is_same_v<T, Constant>) {
          return constant(f.c);
        } else if constexpr (std::is_same_v<T, Sine>) {
          return sine(f.a * std::exp(-0.5 * f.k * f.k * variance), f.k, f.phase);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          const double w2 = f.w * f.w + variance;
          return gaussian(f.a * f.w / std::sqrt(w2), f.c, std::sqrt(w2));
        } else {
          // E[(x+G)^m] expanded in x: Gaussian moments E[G^{2r}] = (2r-1)!! v^r.
          const int n = static_cast<int>(f.coeffs.size());
          std::vector<double> q(f.coeffs.size(), 0.0);
          for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int m = j; m < n; m += 2) {
              const int r = (m - j) / 2;
              s += f.coeffs[static_cast<std::size_t>(m)] * binomial(m, j) *
                   double_factorial_odd(r) * std::pow(variance, r);
            }
            q[static_cast<std::size_t>(j)] = s;
          }
          return polynomial(std::move(q));
        }
      },
      base_);
}

std::string InitialCondition::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Zero>) {
          os << "zero";
        } else if constexpr (std::is_same_v<T, Constant>) {
          os << "constant(" << f.c << ")";
        } else if constexpr (std::is_same_v<T, Sine>) {
          os << "sine(a=" << f.a << ",k=" << f.k << ",phase=" << f.phase << ")";
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          os << "gaussian(a=" << f.a << ",c=" << f.c << ",w=" << f.w << ")";
        } else {
          os << "poly(";
          for (std::size_t i = 0; i < f.coeffs.size(); ++i)
            os << (i ? "," : "") << f.coeffs[i];
          os << ")";
        }
      },
      base_);
  if (exp_wrapped_) {
    std::ostringstream wrapped;
    wrapped << "exp(" << exp_scale_ << " * " << os.str() << ")";
    return wrapped.str();
  }
  return os.str();
}

}  // namespace branchmc
