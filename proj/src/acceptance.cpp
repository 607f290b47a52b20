#include "branchmc/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "branchmc/branching.hpp"
#include "branchmc/kpz_cole_hopf.hpp"
#include "branchmc/kpz_direct.hpp"
#include "branchmc/label_transport.hpp"
#include "branchmc/oracles.hpp"
#include "branchmc/phi4.hpp"

namespace branchmc::acceptance {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

GridSpec base_grid(double t_max, std::size_t nt, std::size_t nx = 64) {
  GridSpec g;
  g.x_min = 0.0;
  g.x_max = 6.283185307179586;
  g.nx = nx;
  g.t_max = t_max;
  g.nt = nt;
  return g;
}

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAIL:") + what;
  }
};

// ---- 1. heat baseline -------------------------------------------------

CriterionResult heat_baseline(std::size_t n, unsigned threads) {
  Check c;
  const GridSpec grid = base_grid(1.0, 64);
  const auto zeros = NoiseRealization::zeros(grid);
  const double sigma_bar = 1.0;
  DiffusionParams diffusion;
  diffusion.sigma_bar = sigma_bar;
  diffusion.dt_path = recommended_dt_path(grid, sigma_bar);
  const auto spec = BranchingSpec::pure_diffusion(diffusion);
  const double x = 0.5;

  const InitialCondition ics[] = {
      InitialCondition::sine(1.0, 1.0, 0.0),
      InitialCondition::gaussian(1.0, 3.141592653589793, 0.5)};
  int run = 0;
  for (const auto& ic : ics) {
    for (const double t : {0.25, 0.5}) {
      const auto est = estimate(spec, {t, x}, ic, zeros,
                                NoiseMode::FixedRealization, n, 1000 + run,
                                threads);
      const double oracle = oracles::heat_kernel_convolution(ic, t, x, sigma_bar);
      const double err = std::fabs(est.mean - oracle);
      c.require(err <= 3.0 * est.stderr_,
                "t=" + num(t) + " |err|=" + num(err) + "<=3se=" +
                    num(3.0 * est.stderr_));
      c.require(est.stderr_ <= 1e-2, "se<=1e-2");
      ++run;
    }
  }
  return {1, "heat baseline vs Gaussian-kernel quadrature", c.pass, c.detail};
}

// ---- 2. clock normalization --------------------------------------------

CriterionResult clock_normalization(std::size_t n) {
  RngStream rng(2001, 0);
  std::size_t survived = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!draw_clock(1.0, 1.0, rng).branched) ++survived;
  const double p = double(survived) / double(n);
  const double target = std::exp(-1.0);
  const double se = std::sqrt(target * (1.0 - target) / double(n));
  Check c;
  c.require(std::fabs(p - target) <= 3.0 * se,
            "p=" + num(p) + " vs e^-1=" + num(target) + " band=" + num(3 * se));
  return {2, "survival frequency matches e^{-t}", c.pass, c.detail};
}

// ---- 3. noise model -----------------------------------------------------

CriterionResult noise_model() {
  GridSpec g;
  g.x_min = 0.0;
  g.x_max = 10.0;
  g.nx = 100;
  g.t_max = 10.0;
  g.nt = 1000;  // 1e5 cells
  const auto a = NoiseRealization::build(g, 42);
  const auto b = NoiseRealization::build(g, 42);
  Check c;
  c.require(a.cells().size() == 100000, "1e5 cells");
  c.require(std::memcmp(a.cells().data(), b.cells().data(),
                        a.cells().size() * sizeof(double)) == 0,
            "same-seed rebuild byte-identical");
  double sumsq = 0.0;
  for (const double v : a.cells()) sumsq += v * v;
  const double var = sumsq / double(a.cells().size());
  const double target = 1.0 / (g.dx() * g.dt_cell());
  c.require(std::fabs(var - target) <= 0.02 * target,
            "cell var=" + num(var) + " vs " + num(target) + " (2%)");
  return {3, "noise cell variance and determinism", c.pass, c.detail};
}

// ---- 4. K4 == K6 oracle equivalence -------------------------------------

CriterionResult k4_k6_equivalence(std::size_t n, unsigned threads) {
  Check c;
  const GridSpec grid = base_grid(0.25, 16);
  // Fine path step: both estimators sample the same lattice field, and the
  // left-endpoint Riemann sum needs resolution well under a noise cell for
  // its systematic gap to vanish inside the statistical band.
  const double dt_path = recommended_dt_path(grid, 2.0) / 4.0;
  const auto ic = InitialCondition::constant(1.0);
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto noise = NoiseRealization::build(grid, seed);
    for (const double lambda : {0.25, 0.5}) {
      KpzChParams params;
      params.lambda = lambda;
      params.t = 0.25;
      params.x = 3.0;
      params.dt_path = dt_path;
      const auto a = z_branching_estimate(params, ic, noise,
                                          NoiseMode::FixedRealization, n,
                                          4000 + seed, threads);
      const auto b = z_exponential_estimate(params, ic, noise, n, 4100 + seed,
                                            threads);
      const double diff = std::fabs(a.mean - b.mean);
      const double band =
          3.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
      c.require(diff <= band, "seed=" + std::to_string(seed) + " lam=" +
                                  num(lambda) + " |d|=" + num(diff) +
                                  "<=" + num(band));
    }
  }
  return {4, "branching vs resummed-exponential equivalence", c.pass, c.detail};
}

// ---- 5. lambda -> 0 limit ------------------------------------------------

CriterionResult lambda_to_zero(std::size_t n, unsigned threads) {
  Check c;
  const GridSpec grid = base_grid(0.25, 16);
  const auto noise = NoiseRealization::build(grid, 5);
  const auto ic = InitialCondition::sine(0.5, 1.0, 0.0);
  const double t = 0.25, x = 1.5;
  DiffusionParams diffusion = kpz_diffusion_params();
  diffusion.dt_path = recommended_dt_path(grid, diffusion.sigma_bar);
  const std::uint64_t seed = 5001;  // shared: common paths across lambdas
  const auto k8 = stochastic_heat_estimate(t, x, ic, noise, diffusion, n,
                                           seed, threads);
  const double exponent_var = k8.stderr_ * k8.stderr_ * double(n);
  double prev = std::numeric_limits<double>::infinity();
  for (const double lambda : {0.1, 0.01, 0.001}) {
    KpzChParams params;
    params.lambda = lambda;
    params.t = t;
    params.x = x;
    const auto z = z_exponential_estimate(params, ic.exp_scaled(lambda), noise,
                                          n, seed, threads);
    const auto h = h_from_z(z, t, lambda);
    const double gap = std::fabs(h.mean - k8.mean);
    c.require(gap <= prev + 1e-12, "monotone at lam=" + num(lambda));
    c.require(gap <= 3.0 * h.stderr_ + lambda * exponent_var,
              "gap=" + num(gap) + "<=3se+lam*Var=" +
                  num(3.0 * h.stderr_ + lambda * exponent_var));
    prev = gap;
  }
  return {5, "transform limit collapses to the additive-noise solution",
          c.pass, c.detail};
}

// ---- 6. DB1 weight bookkeeping -------------------------------------------

CriterionResult db1_bookkeeping(unsigned /*threads*/) {
  Check c;
  const GridSpec grid = base_grid(1.0, 64);
  const auto noise = NoiseRealization::build(grid, 6);
  Db1Params params;
  params.lambda = 1.0;
  params.mu = 1.0;
  params.t = 0.75;
  const double gamma = params.gamma();
  const auto spec = db1_spec(params, grid);
  const auto ic = InitialCondition::sine(1.0, 1.0, 0.3);

  std::size_t checked = 0;
  bool structural = true;
  for (int i = 0; i < 10000; ++i) {
    RngStream rng(6001, i);
    const auto tree = grow_tree(spec, {params.t, 0.5}, noise,
                                NoiseMode::FixedRealization, rng);
    if (tree.truncated) continue;
    const auto v = evaluate(tree, ic);
    double leaves = 1.0;
    for (const auto& leaf : tree.ic_leaves)
      leaves *= ic.derivative(leaf.label_order, leaf.x);
    for (const auto& leaf : tree.noise_leaves) leaves *= leaf.value;
    const double expected = std::pow(gamma, double(tree.events.size())) *
                            ((tree.noise_leaves.size() % 2) ? -1.0 : 1.0) *
                            leaves;
    if (v.value != 0.0 &&
        std::fabs(v.value - expected) > 1e-12 * std::fabs(expected))
      structural = false;
    ++checked;
  }
  c.require(structural && checked > 5000,
            "gamma^k sign rule on " + std::to_string(checked) + " trees");

  // The published four-event sample: three derivative branchings, one noise
  // sampling, leaf orders (2, 3, 3) -> -gamma^4 d2h d3h d3h xi.
  SampleTree tree;
  tree.root = {1.0, 0.0};
  tree.events = {{0.2, 0.1, 0, gamma},
                 {0.4, -0.2, 0, gamma},
                 {0.6, 0.3, 0, gamma},
                 {0.5, 0.7, 2, -gamma}};
  tree.noise_leaves = {{0.5, 0.7, 0.8}};
  tree.ic_leaves = {{0.4, 2}, {1.1, 3}, {-0.3, 3}};
  const auto v = evaluate(tree, ic);
  const double expected = -std::pow(gamma, 4) * 0.8 * ic.derivative(2, 0.4) *
                          ic.derivative(3, 1.1) * ic.derivative(3, -0.3);
  c.require(std::fabs(v.value - expected) <= 1e-12 * std::fabs(expected),
            "-gamma^4 pattern on the hand-built tree");
  return {6, "labelled-process weight bookkeeping", c.pass, c.detail};
}

// ---- 7. DB1 linear limit --------------------------------------------------

CriterionResult db1_linear_limit(std::size_t n, unsigned threads) {
  Check c;
  const GridSpec grid = base_grid(0.5, 32);
  const auto noise = NoiseRealization::build(grid, 7);
  const auto ic = InitialCondition::sine(1.0, 1.0, 0.0);
  const double t = 0.25, x = 2.0;
  DiffusionParams diffusion = kpz_diffusion_params();
  diffusion.dt_path = recommended_dt_path(grid, diffusion.sigma_bar);
  const auto linear = stochastic_heat_estimate(t, x, ic, noise, diffusion, n,
                                               7001, threads,
                                               NoiseSign::MinusXi);
  std::vector<Estimate> by_mu;
  for (const double mu : {0.5, 1.0, 2.0}) {
    Db1Params params;
    params.lambda = 0.0;
    params.mu = mu;
    params.t = t;
    params.x = x;
    const auto est = db1_estimate(params, ic, noise,
                                  NoiseMode::FixedRealization, n, 7002,
                                  threads);
    const double band = 3.0 * std::sqrt(est.stderr_ * est.stderr_ +
                                        linear.stderr_ * linear.stderr_);
    c.require(std::fabs(est.mean - linear.mean) <= band,
              "mu=" + num(mu) + " |d|=" + num(std::fabs(est.mean - linear.mean)) +
                  "<=" + num(band));
    by_mu.push_back(est);
  }
  for (std::size_t i = 0; i + 1 < by_mu.size(); ++i) {
    const double band =
        3.0 * std::sqrt(by_mu[i].stderr_ * by_mu[i].stderr_ +
                        by_mu[i + 1].stderr_ * by_mu[i + 1].stderr_);
    c.require(std::fabs(by_mu[i].mean - by_mu[i + 1].mean) <= band,
              "mu-invariance pair " + std::to_string(i));
  }
  return {7, "linear limit of the labelled process, mu-invariant", c.pass,
          c.detail};
}

// ---- 8. DB1 vs Cole-Hopf ---------------------------------------------------

CriterionResult db1_vs_cole_hopf(std::size_t n, unsigned threads) {
  Check c;
  GridSpec grid = base_grid(0.5, 32);
  const auto zeros = NoiseRealization::zeros(grid);
  Db1Params params;
  params.lambda = 0.1;
  params.t = 0.25;
  params.x = 1.3;
  const auto ic = InitialCondition::sine(0.1, 1.0, 0.0);
  const auto rep = cross_check_cole_hopf(params, ic, zeros, n, 8001, threads);

  oracles::FdOptions fopt;
  fopt.equation = oracles::FdEquation::KpzNoiseless;
  fopt.lambda = params.lambda;
  fopt.t_end = params.t;
  GridSpec fine = grid;
  fine.nx = 256;
  const auto fd = oracles::fd_integrate(fopt, ic, fine);
  const double oracle = fd.value_at(params.x);

  const double tol_direct = std::max(3.0 * rep.direct.stderr_, 2e-3);
  const double tol_ch = std::max(3.0 * rep.cole_hopf.stderr_, 2e-3);
  const double tol_pair = std::max(3.0 * rep.combined_stderr, 2e-3);
  c.require(std::fabs(rep.direct.mean - oracle) <= tol_direct,
            "direct vs fd: " + num(std::fabs(rep.direct.mean - oracle)));
  c.require(std::fabs(rep.cole_hopf.mean - oracle) <= tol_ch,
            "transform vs fd: " + num(std::fabs(rep.cole_hopf.mean - oracle)));
  c.require(rep.discrepancy <= tol_pair,
            "pipelines: " + num(rep.discrepancy) + "<=" + num(tol_pair));
  return {8, "direct process vs log-transform pipeline", c.pass, c.detail};
}

// ---- 9. DB2 deterministic limits -------------------------------------------

CriterionResult db2_limits(std::size_t n, unsigned threads) {
  Check c;
  const GridSpec grid = base_grid(0.5, 32);
  const auto zeros = NoiseRealization::zeros(grid);

  Db2Params params;
  params.t = 0.25;
  const auto const_est = db2_estimate(params, InitialCondition::constant(0.5),
                                      zeros, NoiseMode::FixedRealization, n,
                                      9001, threads);
  const double ode = 0.5 / std::sqrt(1.0 + 2.0 * 0.25 * 0.25);
  c.require(std::fabs(const_est.mean - ode) <=
                std::max(3.0 * const_est.stderr_, 1e-3),
            "ode value " + num(const_est.mean) + " vs " + num(ode));

  params.x = 1.9;
  const auto ic = InitialCondition::sine(0.2, 1.0, 0.0);
  const auto sine_est = db2_estimate(params, ic, zeros,
                                     NoiseMode::FixedRealization, n, 9002,
                                     threads);
  oracles::FdOptions fopt;
  fopt.equation = oracles::FdEquation::Phi4Noiseless;
  fopt.t_end = params.t;
  GridSpec fine = grid;
  fine.nx = 256;
  const auto fd = oracles::fd_integrate(fopt, ic, fine);
  c.require(std::fabs(sine_est.mean - fd.value_at(params.x)) <=
                std::max(3.0 * sine_est.stderr_, 1e-3),
            "fd value " + num(sine_est.mean) + " vs " + num(fd.value_at(params.x)));

  // Structural sign rule on noisy trees: |F| = 3^events with the sign of
  // the cube count (the published five-event sample is -3^5).
  const auto noise = NoiseRealization::build(grid, 9);
  const auto spec = db2_spec(params, grid);
  const auto ic_s = InitialCondition::sine(0.5, 1.0, 0.4);
  bool structural = true;
  std::size_t checked = 0;
  for (int i = 0; i < 10000; ++i) {
    RngStream rng(9003, i);
    const auto tree = grow_tree(spec, {0.25, 0.4}, noise,
                                NoiseMode::FixedRealization, rng);
    if (tree.truncated) continue;
    const auto v = evaluate(tree, ic_s);
    std::size_t cubes = 0;
    for (const auto& e : tree.events)
      if (spec.rules[std::size_t(e.rule)].offspring == 3) ++cubes;
    double leaves = 1.0;
    for (const auto& leaf : tree.ic_leaves) leaves *= ic_s.value(leaf.x);
    for (const auto& leaf : tree.noise_leaves) leaves *= leaf.value;
    const double expected = std::pow(3.0, double(tree.events.size())) *
                            ((cubes % 2) ? -1.0 : 1.0) * leaves;
    if (v.value != 0.0 &&
        std::fabs(v.value - expected) > 1e-12 * std::fabs(expected))
      structural = false;
    ++checked;
  }
  c.require(structural && checked > 5000,
            "sign rule on " + std::to_string(checked) + " trees");

  SampleTree tree;  // one cube, two continues, two noise samplings
  tree.root = {1.0, 0.0};
  tree.events = {{0.1, 0.0, 0, -3.0},
                 {0.3, 0.5, 1, 3.0},
                 {0.4, 0.2, 1, 3.0},
                 {0.5, 0.3, 2, 3.0},
                 {0.7, 0.9, 2, 3.0}};
  tree.noise_leaves = {{0.5, 0.3, 1.7}, {0.7, 0.9, -0.6}};
  tree.ic_leaves = {{0.2, 0}, {0.8, 0}, {1.4, 0}};
  const auto v5 = evaluate(tree, InitialCondition::constant(1.0));
  c.require(std::fabs(v5.value - (-std::pow(3.0, 5) * 1.7 * -0.6)) <= 1e-9,
            "-3^5 pattern");
  return {9, "ternary-process deterministic limits and sign rule", c.pass,
          c.detail};
}

// ---- 10. Picard cross-check --------------------------------------------------

CriterionResult picard_cross_check(std::size_t n, unsigned threads) {
  Check c;
  const GridSpec grid = base_grid(0.25, 16);
  const auto noise = NoiseRealization::build(grid, 10);
  const auto ic = InitialCondition::constant(1.0);

  KpzChParams params;
  params.lambda = 0.25;
  params.t = 0.25;
  params.x = 3.0;
  const auto mc = z_branching_estimate(params, ic, noise,
                                       NoiseMode::FixedRealization, n, 10001,
                                       threads);

  oracles::PicardOptions popt;
  popt.equation = oracles::PicardEquation::Z;
  popt.ic = ic;
  popt.lambda = params.lambda;
  popt.t_end = params.t;
  popt.n_iters = 6;
  const auto picard = oracles::picard_iterate(popt, noise);
  const double oracle = picard.solution.value_at(params.x);
  const double tol = std::max(3.0 * mc.stderr_, 5e-3);
  c.require(std::fabs(mc.mean - oracle) <= tol,
            "mc=" + num(mc.mean) + " picard=" + num(oracle) + " tol=" + num(tol));
  return {10, "Monte Carlo vs six Picard iterates on shared noise", c.pass,
          c.detail};
}

// ---- 11. derivative weights ---------------------------------------------------

CriterionResult derivative_weights(std::size_t n, unsigned threads) {
  Check c;
  DiffusionParams p;
  p.sigma_bar = 1.0;
  p.dt_path = 1.0;

  // Exact finite-dt targets (the heat-smoothed derivative).
  {
    const auto cubic = InitialCondition::polynomial({0, 0, 0, 1});
    const auto est = estimate_derivative(1, cubic, 1.0, p, 0.1, n, 11001,
                                         threads);
    const double target = cubic.heat_evolved(0.1).derivative(1, 1.0);
    c.require(std::fabs(est.mean - target) <= 3.0 * est.stderr_,
              "cubic d1: " + num(est.mean) + " vs " + num(target));
  }
  {
    const auto sq = InitialCondition::polynomial({0, 0, 1});
    DiffusionParams drift = p;
    drift.b_bar = 1.0;
    drift.sigma_bar = 0.5;
    const auto est = estimate_derivative(2, sq, 0.7, drift, 0.05, n, 11002,
                                         threads);
    c.require(std::fabs(est.mean - 2.0) <= 3.0 * est.stderr_,
              "x^2 d2 -> 2: " + num(est.mean));
  }

  // O(dt) slope of the smoothing bias.
  const auto wavy = InitialCondition::sine(1.0, 3.0, 0.0);
  std::vector<double> errors;
  for (const double dt : {0.1, 0.05, 0.025}) {
    const auto est = estimate_derivative(1, wavy, 0.0, p, dt, n, 11003,
                                         threads);
    errors.push_back(std::fabs(est.mean - wavy.derivative(1, 0.0)));
  }
  c.require(errors[0] / errors[1] > 1.4 && errors[0] / errors[1] < 2.6 &&
                errors[1] / errors[2] > 1.4 && errors[1] / errors[2] < 2.6,
            "O(dt) slope ratios " + num(errors[0] / errors[1]) + "," +
                num(errors[1] / errors[2]));

  // Constant-coefficient shortcut, positive and negative cases.
  DiffusionParams transport;
  transport.sigma_bar = 2.0;
  transport.dt_path = 1.0;
  const auto rep = shortcut_consistency_check(InitialCondition::sine(1, 1, 0),
                                              1, 0.5, transport, n, 11004,
                                              threads);
  c.require(rep.diff <= 3.0 * rep.shortcut.stderr_,
            "shortcut d1: diff=" + num(rep.diff));
  const auto gap = functional_label_gap(InitialCondition::sine(1, 1, 0), 0.5,
                                        transport, n, 11005, threads);
  c.require(gap.gap > 3.0 * gap.endpoint_mc.stderr_,
            "nonlinear label breaks by " + num(gap.gap) + " > " +
                num(3.0 * gap.endpoint_mc.stderr_));
  c.require(std::fabs(gap.endpoint_mc.mean - gap.evolved_f) <=
                3.0 * gap.endpoint_mc.stderr_,
            "endpoint substitution tracks the evolved square");
  return {11, "derivative weights, O(dt) slope, transport shortcut", c.pass,
          c.detail};
}

// ---- 12. reproducibility / performance ------------------------------------------

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

CriterionResult reproducibility(const SuiteOptions& opt) {
  Check c;

  if (!opt.skip_cli_checks && !opt.cli_path.empty()) {
    const fs::path dir = opt.work_dir.empty()
                             ? fs::temp_directory_path() / "branchmc_suite"
                             : fs::path(opt.work_dir);
    fs::create_directories(dir);
    const auto run_cli = [&](const std::string& args, const fs::path& out) {
      const std::string cmd = "\"" + opt.cli_path + "\" " + args + " --out " +
                              out.string() + " >/dev/null 2>&1";
      return std::system(cmd.c_str()) == 0;
    };
    const std::string heat_args =
        "heat --t 0.5 --x 0.5 --ic sine --samples 20000 --seed 1";
    const std::string ch_args =
        "kpz-ch --compare-k6 --lambda 0.25 --t 0.25 --x 3.0 --noise-seed 1 "
        "--samples 5000 --seed 2 --t-max 0.25 --nt 16";
    bool ok = true;
    ok = ok && run_cli(heat_args + " --threads 1", dir / "heat_t1.csv");
    ok = ok && run_cli(heat_args + " --threads 4", dir / "heat_t4.csv");
    ok = ok && run_cli(ch_args + " --threads 1", dir / "ch_t1.csv");
    ok = ok && run_cli(ch_args + " --threads 4", dir / "ch_t4.csv");
    c.require(ok, "cli invocations succeed");
    if (ok) {
      c.require(read_file(dir / "heat_t1.csv") == read_file(dir / "heat_t4.csv"),
                "heat csv byte-identical across threads 1/4");
      c.require(read_file(dir / "ch_t1.csv") == read_file(dir / "ch_t4.csv"),
                "compare-k6 csv byte-identical across threads 1/4");
    }
  } else {
    c.require(true, "cli checks skipped");
  }

  // In-process determinism across thread counts.
  const GridSpec grid = base_grid(0.5, 32);
  const auto noise = NoiseRealization::build(grid, 12);
  Db2Params params;
  params.t = 0.5;
  const auto spec = db2_spec(params, grid);
  const auto ic = InitialCondition::sine(0.5, 1.0, 0.0);
  const auto e1 = estimate(spec, {0.5, 0.3}, ic, noise,
                           NoiseMode::FixedRealization, 20000, 12001, 1);
  const auto e4 = estimate(spec, {0.5, 0.3}, ic, noise,
                           NoiseMode::FixedRealization, 20000, 12001, 4);
  c.require(e1.mean == e4.mean && e1.stderr_ == e4.stderr_,
            "estimate bitwise thread-invariant");

  // 1e5 pure-diffusion samples under five seconds.
  DiffusionParams diffusion;
  diffusion.sigma_bar = 1.0;
  diffusion.dt_path = recommended_dt_path(grid, 1.0);
  const auto pure = BranchingSpec::pure_diffusion(diffusion);
  const auto t0 = std::chrono::steady_clock::now();
  (void)estimate(pure, {0.5, 0.5}, ic, noise, NoiseMode::FixedRealization,
                 100000, 12002, 0);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  c.require(elapsed < 5.0, "1e5 heat samples under 5 s");
  return {12, "byte-identical outputs across thread counts; throughput", c.pass,
          c.detail};
}

}  // namespace

std::vector<CriterionResult> run_all(const SuiteOptions& options) {
  const auto scaled = [&](std::size_t n) {
    const auto v = static_cast<std::size_t>(double(n) * options.sample_scale);
    return std::max<std::size_t>(v, 1000);
  };
  const unsigned threads = options.threads;

  std::vector<CriterionResult> results;
  results.push_back(heat_baseline(scaled(100000), threads));
  results.push_back(clock_normalization(scaled(100000)));
  results.push_back(noise_model());
  results.push_back(k4_k6_equivalence(scaled(100000), threads));
  results.push_back(lambda_to_zero(scaled(50000), threads));
  results.push_back(db1_bookkeeping(threads));
  results.push_back(db1_linear_limit(scaled(100000), threads));
  results.push_back(db1_vs_cole_hopf(scaled(100000), threads));
  results.push_back(db2_limits(scaled(100000), threads));
  results.push_back(picard_cross_check(scaled(100000), threads));
  results.push_back(derivative_weights(scaled(200000), threads));
  results.push_back(reproducibility(options));
  return results;
}

}  // namespace branchmc::acceptance
