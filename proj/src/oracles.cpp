#include "branchmc/oracles.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "branchmc/kernels.hpp"

namespace branchmc::oracles {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double fa, double b, double fb, double m, double fm,
                        double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("quadrature did not converge");
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                          depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  // Pre-split before refining adaptively so that narrow features away from
  // the window center cannot slip between the first sample points.
  constexpr int kPanels = 64;
  const double h = (b - a) / kPanels;
  const double panel_tol = tol / kPanels;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double pa = a + p * h;
    const double pb = p + 1 == kPanels ? b : pa + h;
    const double m = 0.5 * (pa + pb);
    const double fa = f(pa);
    const double fb = f(pb);
    const double fm = f(m);
    const double whole = simpson(pa, fa, pb, fb, fm);
    total += adaptive_simpson(f, pa, fa, pb, fb, m, fm, whole, panel_tol, 40);
  }
  return total;
}

constexpr double kQuadTol = 1e-9;
constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

double GridFunction::value_at(double x) const {
  const double h = dx();
  const double L = x_max - x_min;
  double u = (x - x_min) / h - 0.5;  // node index coordinate
  const double nxd = static_cast<double>(nx);
  u -= nxd * std::floor(u / nxd);
  auto i0 = static_cast<std::size_t>(u);
  if (i0 >= nx) i0 = 0;
  const std::size_t i1 = (i0 + 1) % nx;
  const double frac = u - static_cast<double>(i0);
  (void)L;
  return values[i0] * (1.0 - frac) + values[i1] * frac;
}

void GridFunction::write_csv(std::ostream& os) const {
  os << "x,value\n";
  char buf[80];
  for (std::size_t i = 0; i < nx; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", node(i), values[i]);
    os << buf;
  }
}

DiffReport compare(const GridFunction& a, const GridFunction& b) {
  if (a.nx != b.nx || a.x_min != b.x_min || a.x_max != b.x_max)
    throw std::invalid_argument("compare: grid shape mismatch");
  DiffReport rep;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.nx; ++i) {
    const double d = std::fabs(a.values[i] - b.values[i]);
    rep.sup = std::max(rep.sup, d);
    sq += d * d;
  }
  rep.l2 = std::sqrt(sq / static_cast<double>(a.nx));
  return rep;
}

double heat_kernel_convolution(const std::function<double(double)>& f,
                               double t, double x, double sigma_bar,
                               double extra_halfwidth) {
  if (!(t > 0.0))
    throw std::invalid_argument("heat_kernel_convolution: t must be > 0");
  if (!(sigma_bar > 0.0))
    throw std::invalid_argument("heat_kernel_convolution: sigma_bar must be > 0");
  const double var = sigma_bar * t;
  const double sd = std::sqrt(var);
  const double half = 12.0 * sd + extra_halfwidth;
  const double norm = 1.0 / std::sqrt(kTwoPi * var);
  const auto integrand = [&](double y) {
    const double z = (y - x) / sd;
    return norm * std::exp(-0.5 * z * z) * f(y);
  };
  return integrate(integrand, x - half, x + half, kQuadTol);
}

double heat_kernel_convolution(const InitialCondition& ic, double t, double x,
                               double sigma_bar) {
  // Widen the window for data with structure away from x (e.g. an offset
  // Gaussian bump); 20 units covers every family used at desk scale.
  return heat_kernel_convolution([&](double y) { return ic.value(y); }, t, x,
                                 sigma_bar, 20.0);
}

std::vector<double> heat_weights(const GridSpec& grid, double sigma_bar,
                                 double s) {
  grid.validate();
  const std::size_t n = grid.nx;
  std::vector<double> w(n * n, 0.0);
  if (s <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
    return w;
  }
  const double var = sigma_bar * s;
  const double L = grid.length();
  const double dx = grid.dx();
  // Periodic images; +-8 standard deviations or one wrap, whichever is more.
  const int wraps =
      std::max(1, static_cast<int>(std::ceil(8.0 * std::sqrt(var) / L)));
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double base = (static_cast<double>(i) - static_cast<double>(j)) * dx;
      double k = 0.0;
      for (int r = -wraps; r <= wraps; ++r) {
        const double d = base + static_cast<double>(r) * L;
        k += std::exp(-0.5 * d * d / var);
      }
      w[i * n + j] = k;
      row_sum += k;
    }
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] /= row_sum;
  }
  return w;
}

namespace {

void apply_weights(const std::vector<double>& w, const std::vector<double>& v,
                   std::vector<double>& out) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    out[i] = kernels::reduce_dot(w.data() + i * n, v.data(), n);
}

}  // namespace

PicardResult picard_iterate(const PicardOptions& opt,
                            const NoiseRealization& noise) {
  if (opt.n_iters < 1)
    throw std::invalid_argument("picard_iterate: n_iters must be >= 1");
  const GridSpec& grid = noise.spec();
  const double dt = grid.dt_cell();
  const double m_exact = opt.t_end / dt;
  const auto levels = static_cast<std::size_t>(std::llround(m_exact));
  if (std::fabs(m_exact - static_cast<double>(levels)) > 1e-9 || levels == 0 ||
      levels > grid.nt)
    throw std::invalid_argument(
        "picard_iterate: t_end must be a positive multiple of dt_cell within "
        "the horizon");
  const std::size_t n = grid.nx;

  // Transition weights for every multiple of dt up to t_end.
  std::vector<std::vector<double>> weights(levels + 1);
  for (std::size_t l = 0; l <= levels; ++l)
    weights[l] = heat_weights(grid, opt.sigma_bar, static_cast<double>(l) * dt);

  std::vector<double> ic_vec(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = grid.x_min + (static_cast<double>(j) + 0.5) * grid.dx();
    ic_vec[j] = opt.ic.value(xj);
  }

  const double clock =
      opt.equation == PicardEquation::Z
          ? 1.0
          : (opt.equation == PicardEquation::DB1 ? opt.mu : 0.0);
  const double xi_sign = noise_sign_factor(opt.noise_sign);
  const double dx = grid.dx();

  // Noise row for physical time m*dt (lower-inclusive; the horizon clamps).
  const auto xi_row = [&](std::size_t m) {
    const std::size_t row = std::min(m, grid.nt - 1);
    return noise.cells().subspan(row * n, n);
  };

  // Free term e^{-clock t_m} H_{t_m} ic at every level.
  std::vector<std::vector<double>> free_term(levels + 1,
                                             std::vector<double>(n));
  for (std::size_t m = 0; m <= levels; ++m) {
    apply_weights(weights[m], ic_vec, free_term[m]);
    const double decay = std::exp(-clock * static_cast<double>(m) * dt);
    for (double& v : free_term[m]) v *= decay;
  }

  // Branching kernel K(u, xi) of the integral term, by equation.
  std::vector<double> grad(n);
  const auto kernel_at = [&](const std::vector<double>& u, std::size_t m,
                             std::vector<double>& out) {
    const auto xi = xi_row(m);
    switch (opt.equation) {
      case PicardEquation::Z:
        for (std::size_t j = 0; j < n; ++j)
          out[j] = opt.lambda * xi[j] * u[j];
        break;
      case PicardEquation::DB1:
        for (std::size_t j = 0; j < n; ++j) {
          const double d =
              (u[(j + 1) % n] - u[(j + n - 1) % n]) / (2.0 * dx);
          grad[j] = d;
        }
        for (std::size_t j = 0; j < n; ++j)
          out[j] = opt.lambda * grad[j] * grad[j] + opt.mu * u[j] +
                   xi_sign * xi[j];
        break;
      case PicardEquation::Phi4:
        for (std::size_t j = 0; j < n; ++j)
          out[j] = -(u[j] * u[j] * u[j] - xi_sign * xi[j]);
        break;
    }
  };

  std::vector<std::vector<double>> prev = free_term;
  std::vector<std::vector<double>> next(levels + 1, std::vector<double>(n));
  std::vector<double> kern(n), prop(n);
  PicardResult result;

  for (std::size_t it = 1; it <= opt.n_iters; ++it) {
    for (std::size_t m = 0; m <= levels; ++m) {
      next[m] = free_term[m];
      if (m == 0) continue;
      for (std::size_t l = 0; l <= m; ++l) {
        // integrand at s = l*dt propagated from physical time (m-l)*dt
        kernel_at(prev[m - l], m - l, kern);
        apply_weights(weights[l], kern, prop);
        const double decay = std::exp(-clock * static_cast<double>(l) * dt);
        const double trap = (l == 0 || l == m) ? 0.5 * dt : dt;
        for (std::size_t j = 0; j < n; ++j)
          next[m][j] += trap * decay * prop[j];
      }
    }
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      sup = std::max(sup, std::fabs(next[levels][j] - prev[levels][j]));
    result.sup_diffs.push_back(sup);
    for (std::size_t m = 0; m <= levels; ++m) {
      for (double v : next[m])
        if (!std::isfinite(v))
          throw PicardDivergence(it, "picard_iterate: non-finite iterate");
    }
    std::swap(prev, next);
  }

  result.solution.x_min = grid.x_min;
  result.solution.x_max = grid.x_max;
  result.solution.nx = n;
  result.solution.time = opt.t_end;
  result.solution.values = prev[levels];
  return result;
}

GridFunction fd_integrate(const FdOptions& opt, const InitialCondition& ic,
                          const GridSpec& grid) {
  grid.validate();
  const std::size_t n = grid.nx;
  const double dx = grid.dx();
  const double cfl_limit = dx * dx / (2.0 * opt.sigma_bar);
  const double dt = opt.dt > 0.0 ? opt.dt : 0.4 * cfl_limit;
  if (dt > cfl_limit * (1.0 + 1e-12))
    throw std::invalid_argument("fd_integrate: dt violates the CFL bound");
  if (!(opt.t_end >= 0.0))
    throw std::invalid_argument("fd_integrate: negative t_end");

  GridFunction u;
  u.x_min = grid.x_min;
  u.x_max = grid.x_max;
  u.nx = n;
  u.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) u.values[j] = ic.value(u.node(j));

  const double nu = 0.5 * opt.sigma_bar;
  std::vector<double> lap(n), next(n);
  double t = 0.0;
  while (t < opt.t_end - 1e-15) {
    const double step = std::min(dt, opt.t_end - t);
    kernels::lap_periodic(u.values.data(), n, lap.data());
    const double c = nu * step / (dx * dx);
    if (opt.equation == FdEquation::KpzNoiseless) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d =
            (u.values[(j + 1) % n] - u.values[(j + n - 1) % n]) / (2.0 * dx);
        next[j] = u.values[j] + c * lap[j] + step * opt.lambda * d * d;
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = u.values[j];
        next[j] = v + c * lap[j] - step * v * v * v;
      }
    }
    u.values.swap(next);
    t += step;
    for (double v : u.values)
      if (!std::isfinite(v))
        throw std::runtime_error("fd_integrate: solution blew up");
  }
  u.time = opt.t_end;
  return u;
}

}  // namespace branchmc::oracles
