// branchmc: Monte Carlo solvers for noise-driven growth and relaxation
// equations via backward-in-time branching diffusions, with deterministic
// oracles for validation. Batch CLI; every numerical output is a pure
// function of the printed configuration (thread count never changes values).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "branchmc/acceptance.hpp"
#include "branchmc/branching.hpp"
#include "branchmc/kpz_cole_hopf.hpp"
#include "branchmc/kpz_direct.hpp"
#include "branchmc/label_transport.hpp"
#include "branchmc/oracles.hpp"
#include "branchmc/phi4.hpp"

using namespace branchmc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct OutputTarget {
  std::string path;  // empty -> stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    os << content;
  }
};

struct GridFlags {
  double x_min = 0.0;
  double x_max = 6.283185307179586;
  std::size_t nx = 64;
  double t_max = 1.0;
  std::size_t nt = 64;

  GridSpec to_spec() const { return {x_min, x_max, nx, t_max, nt}; }
};

struct NoiseFlags {
  std::string kind = "seeded";  // seeded | zero | constant
  std::uint64_t seed = 1;
  double value = 0.0;
  std::string boundary = "periodic";  // periodic | zero-outside
  std::string mode = "fixed";         // fixed | resampled
  std::string load_path;
  std::string dump_path;

  BoundaryPolicy policy() const {
    return boundary == "zero-outside" ? BoundaryPolicy::ZeroOutside
                                      : BoundaryPolicy::PeriodicInX;
  }
  NoiseMode noise_mode() const {
    return mode == "resampled" ? NoiseMode::ResampledPerEvent
                               : NoiseMode::FixedRealization;
  }

  NoiseRealization build(const GridSpec& grid) const {
    std::optional<NoiseRealization> noise;
    if (!load_path.empty()) {
      std::ifstream is(load_path, std::ios::binary);
      if (!is) throw std::invalid_argument("cannot open noise file: " + load_path);
      noise = NoiseRealization::load(is);
    } else if (kind == "zero") {
      noise = NoiseRealization::zeros(grid, policy());
    } else if (kind == "constant") {
      noise = NoiseRealization::constant(grid, value, policy());
    } else if (kind == "seeded") {
      noise = NoiseRealization::build(grid, seed, policy());
    } else {
      throw std::invalid_argument("unknown noise kind: " + kind);
    }
    if (!dump_path.empty()) {
      std::ofstream os(dump_path, std::ios::binary);
      if (!os) throw std::invalid_argument("cannot open dump file: " + dump_path);
      noise->dump(os);
    }
    return std::move(*noise);
  }
};

struct IcFlags {
  std::string kind = "sine";  // zero|constant|sine|gaussian|poly
  double a = 1.0;             // amplitude or constant value
  double k = 1.0;             // wavenumber
  double phase = 0.0;
  double center = 3.141592653589793;
  double width = 0.5;
  std::vector<double> coeffs;
  double exp_scale = 0.0;  // != 0 wraps the data in exp(scale * ic)

  InitialCondition build() const {
    InitialCondition ic = InitialCondition::zero();
    if (kind == "zero")
      ic = InitialCondition::zero();
    else if (kind == "constant")
      ic = InitialCondition::constant(a);
    else if (kind == "sine")
      ic = InitialCondition::sine(a, k, phase);
    else if (kind == "gaussian")
      ic = InitialCondition::gaussian(a, center, width);
    else if (kind == "poly")
      ic = InitialCondition::polynomial(coeffs);
    else
      throw std::invalid_argument("unknown initial condition: " + kind);
    if (exp_scale != 0.0) ic = ic.exp_scaled(exp_scale);
    return ic;
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--x-min", g.x_min, "grid lower edge");
  cmd->add_option("--x-max", g.x_max, "grid upper edge");
  cmd->add_option("--nx", g.nx, "spatial cells");
  cmd->add_option("--t-max", g.t_max, "noise horizon");
  cmd->add_option("--nt", g.nt, "temporal cells");
}

void add_noise_flags(CLI::App* cmd, NoiseFlags& n) {
  cmd->add_option("--noise", n.kind, "noise field: seeded|zero|constant")
      ->check(CLI::IsMember({"seeded", "zero", "constant"}));
  cmd->add_option("--noise-seed", n.seed, "seed of the noise realization");
  cmd->add_option("--noise-value", n.value, "cell value for --noise constant");
  cmd->add_option("--boundary", n.boundary, "periodic|zero-outside")
      ->check(CLI::IsMember({"periodic", "zero-outside"}));
  cmd->add_option("--noise-mode", n.mode,
                  "fixed (one realization) | resampled (fresh draw per event)")
      ->check(CLI::IsMember({"fixed", "resampled"}));
  cmd->add_option("--noise-load", n.load_path, "read the realization from a dump");
  cmd->add_option("--noise-dump", n.dump_path, "write the realization to a file");
}

void add_ic_flags(CLI::App* cmd, IcFlags& ic, const std::string& def = "sine") {
  ic.kind = def;
  cmd->add_option("--ic", ic.kind, "zero|constant|sine|gaussian|poly")
      ->check(CLI::IsMember({"zero", "constant", "sine", "gaussian", "poly"}));
  cmd->add_option("--ic-a", ic.a, "amplitude / constant value");
  cmd->add_option("--ic-k", ic.k, "wavenumber (sine)");
  cmd->add_option("--ic-phase", ic.phase, "phase (sine)");
  cmd->add_option("--ic-center", ic.center, "center (gaussian)");
  cmd->add_option("--ic-width", ic.width, "width (gaussian)");
  cmd->add_option("--ic-coeffs", ic.coeffs, "coefficients c0,c1,... (poly)");
  cmd->add_option("--ic-exp-scale", ic.exp_scale,
                  "wrap the data as exp(scale * ic); 0 disables");
}

struct EstimateRow {
  double x = 0.0;
  Estimate est;
  std::optional<double> oracle;
};

std::string rows_to_csv(const std::vector<EstimateRow>& rows) {
  std::ostringstream os;
  os << "x,mean,stderr,n,oracle,abs_err,truncated\n";
  for (const auto& r : rows) {
    const double oracle = r.oracle ? *r.oracle
                                   : std::numeric_limits<double>::quiet_NaN();
    const double abs_err =
        r.oracle ? std::fabs(r.est.mean - oracle)
                 : std::numeric_limits<double>::quiet_NaN();
    os << fmt(r.x) << ',' << fmt(r.est.mean) << ',' << fmt(r.est.stderr_) << ','
       << r.est.n_samples << ',' << fmt(oracle) << ',' << fmt(abs_err) << ','
       << r.est.n_truncated << '\n';
  }
  return os.str();
}

std::string summary_block(const std::vector<EstimateRow>& rows) {
  std::size_t truncated = 0, nonfinite = 0;
  double max_abs = 0.0, kurt = 0.0;
  for (const auto& r : rows) {
    truncated += r.est.n_truncated;
    nonfinite += r.est.n_nonfinite;
    max_abs = std::max(max_abs, r.est.max_abs);
    kurt = std::max(kurt, r.est.excess_kurtosis);
  }
  std::ostringstream os;
  os << "# truncated=" << truncated << " nonfinite=" << nonfinite
     << " max_abs_sample=" << fmt(max_abs)
     << " max_excess_kurtosis=" << fmt(kurt) << '\n';
  return os.str();
}

int check_finite(const std::vector<EstimateRow>& rows) {
  for (const auto& r : rows)
    if (!std::isfinite(r.est.mean) || !std::isfinite(r.est.stderr_))
      return kExitNumeric;
  return kExitOk;
}

void print_traces(const BranchingSpec& spec, const std::vector<double>& xs,
                  double t, const NoiseRealization& noise, NoiseMode mode,
                  std::uint64_t master_seed, std::size_t n_trace) {
  for (std::size_t i = 0; i < n_trace; ++i) {
    RngStream rng(master_seed, i);
    const auto tree = grow_tree(spec, {t, xs.empty() ? 0.0 : xs[0]}, noise,
                                mode, rng);
    for (const auto& e : tree.events)
      std::cerr << "tree=" << i << " s=" << fmt(e.s) << " x=" << fmt(e.x)
                << " rule=" << spec.rules[std::size_t(e.rule)].name
                << " weight=" << fmt(e.weight) << '\n';
    std::cerr << "tree=" << i << " events=" << tree.events.size()
              << " ic_leaves=" << tree.ic_leaves.size()
              << " noise_leaves=" << tree.noise_leaves.size()
              << " truncated=" << (tree.truncated ? 1 : 0) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Monte Carlo solvers for noise-driven SPDEs via backward branching "
      "diffusions, validated against deterministic oracles"};
  app.set_config("--config", "", "key=value config file ([subcommand] sections)");
  app.require_subcommand(1);

  // ---- heat ----------------------------------------------------------
  auto* heat = app.add_subcommand(
      "heat", "pure-diffusion baseline against the Gaussian-kernel oracle");
  GridFlags heat_grid;
  IcFlags heat_ic;
  NoiseFlags heat_noise;  // only used for dt defaults; no noise enters
  double heat_t = 0.5, heat_sigma = 1.0, heat_dt_path = 0.0;
  std::vector<double> heat_x = {0.5};
  std::size_t heat_n = 100000;
  std::uint64_t heat_seed = 1;
  unsigned heat_threads = 0;
  OutputTarget heat_out;
  heat->add_option("--t", heat_t, "time");
  heat->add_option("--x", heat_x, "query points")->expected(-1);
  heat->add_option("--samples", heat_n, "Monte Carlo samples per point");
  heat->add_option("--seed", heat_seed, "master seed");
  heat->add_option("--sigma-bar", heat_sigma, "diffusion variance rate");
  heat->add_option("--dt-path", heat_dt_path, "path step (0 = auto)");
  heat->add_option("--threads", heat_threads, "worker threads (0 = hardware)");
  heat->add_option("--out", heat_out.path, "CSV output path (default stdout)");
  add_grid_flags(heat, heat_grid);
  add_ic_flags(heat, heat_ic);

  // ---- kpz-ch --------------------------------------------------------
  auto* kpzch = app.add_subcommand(
      "kpz-ch", "growth equation through the damped log transform");
  GridFlags ch_grid;
  ch_grid.t_max = 0.5;
  ch_grid.nt = 32;
  IcFlags ch_ic;
  NoiseFlags ch_noise;
  double ch_lambda = 0.5, ch_t = 0.25, ch_sigma = 2.0, ch_dt_path = 0.0;
  std::vector<double> ch_x = {3.0};
  std::size_t ch_n = 100000;
  std::uint64_t ch_seed = 1;
  unsigned ch_threads = 0;
  bool ch_compare_k6 = false, ch_recover_h = false, ch_lambda0 = false;
  std::vector<double> ch_lambdas = {0.1, 0.01, 0.001};
  std::string ch_estimator = "branching";
  std::size_t ch_trace = 0;
  OutputTarget ch_out;
  kpzch->add_option("--lambda", ch_lambda, "coupling");
  kpzch->add_option("--t", ch_t, "time");
  kpzch->add_option("--x", ch_x, "query points")->expected(-1);
  kpzch->add_option("--samples", ch_n, "samples per estimator");
  kpzch->add_option("--seed", ch_seed, "master seed");
  kpzch->add_option("--sigma-bar", ch_sigma, "diffusion variance rate");
  kpzch->add_option("--dt-path", ch_dt_path, "path step (0 = auto)");
  kpzch->add_option("--threads", ch_threads, "worker threads");
  kpzch->add_option("--estimator", ch_estimator, "branching | exponential")
      ->check(CLI::IsMember({"branching", "exponential"}));
  kpzch->add_flag("--compare-k6", ch_compare_k6,
                  "run both estimators and report their discrepancy");
  kpzch->add_flag("--recover-h", ch_recover_h,
                  "report h = (t + log Z)/lambda instead of Z");
  kpzch->add_flag("--lambda0-check", ch_lambda0,
                  "sweep lambda and compare against the additive-noise limit");
  kpzch->add_option("--lambdas", ch_lambdas, "couplings for --lambda0-check")
      ->expected(-1);
  kpzch->add_option("--trace", ch_trace, "print event logs for N trees to stderr");
  kpzch->add_option("--out", ch_out.path, "CSV output path");
  add_grid_flags(kpzch, ch_grid);
  add_noise_flags(kpzch, ch_noise);
  add_ic_flags(kpzch, ch_ic);

  // ---- kpz-direct ----------------------------------------------------
  auto* kpzd = app.add_subcommand(
      "kpz-direct", "growth equation via the labelled two-offspring process");
  GridFlags d_grid;
  d_grid.t_max = 0.5;
  d_grid.nt = 32;
  IcFlags d_ic;
  NoiseFlags d_noise;
  double d_lambda = 0.1, d_mu = 1.0, d_t = 0.25, d_sigma = 2.0, d_dt_path = 0.0;
  std::vector<double> d_x = {1.3};
  std::size_t d_n = 100000;
  std::uint64_t d_seed = 1;
  unsigned d_threads = 0;
  bool d_cross = false;
  std::string d_sign = "minus";
  std::size_t d_trace = 0;
  std::size_t d_max_events = 10000;
  int d_max_label = 8;
  OutputTarget d_out;
  kpzd->add_option("--lambda", d_lambda, "nonlinearity coupling");
  kpzd->add_option("--mu", d_mu, "added/subtracted clock rate");
  kpzd->add_option("--t", d_t, "time");
  kpzd->add_option("--x", d_x, "query points")->expected(-1);
  kpzd->add_option("--samples", d_n, "samples");
  kpzd->add_option("--seed", d_seed, "master seed");
  kpzd->add_option("--sigma-bar", d_sigma, "diffusion variance rate");
  kpzd->add_option("--dt-path", d_dt_path, "path step (0 = auto)");
  kpzd->add_option("--threads", d_threads, "worker threads");
  kpzd->add_option("--noise-sign", d_sign, "minus | plus (sign of the xi term)")
      ->check(CLI::IsMember({"minus", "plus"}));
  kpzd->add_option("--max-events", d_max_events, "tree event cap");
  kpzd->add_option("--max-label-order", d_max_label, "derivative label cap");
  kpzd->add_flag("--cross-check", d_cross,
                 "also run the log-transform pipeline and compare");
  kpzd->add_option("--trace", d_trace, "print event logs for N trees to stderr");
  kpzd->add_option("--out", d_out.path, "CSV output path");
  add_grid_flags(kpzd, d_grid);
  add_noise_flags(kpzd, d_noise);
  add_ic_flags(kpzd, d_ic);

  // ---- phi4 ----------------------------------------------------------
  auto* phi = app.add_subcommand(
      "phi4", "cubic relaxation equation via the ternary process");
  GridFlags p_grid;
  p_grid.t_max = 0.5;
  p_grid.nt = 32;
  IcFlags p_ic;
  NoiseFlags p_noise;
  double p_t = 0.25, p_sigma = 2.0, p_dt_path = 0.0;
  std::vector<double> p_x = {1.9};
  std::size_t p_n = 100000;
  std::uint64_t p_seed = 1;
  unsigned p_threads = 0;
  std::string p_sign = "plus";
  std::size_t p_trace = 0;
  std::size_t p_max_events = 10000;
  OutputTarget p_out;
  phi->add_option("--t", p_t, "time");
  phi->add_option("--x", p_x, "query points")->expected(-1);
  phi->add_option("--samples", p_n, "samples");
  phi->add_option("--seed", p_seed, "master seed");
  phi->add_option("--sigma-bar", p_sigma, "diffusion variance rate");
  phi->add_option("--dt-path", p_dt_path, "path step (0 = auto)");
  phi->add_option("--threads", p_threads, "worker threads");
  phi->add_option("--noise-sign", p_sign, "plus | minus")
      ->check(CLI::IsMember({"plus", "minus"}));
  phi->add_option("--max-events", p_max_events, "tree event cap");
  phi->add_option("--trace", p_trace, "print event logs for N trees to stderr");
  phi->add_option("--out", p_out.path, "CSV output path");
  add_grid_flags(phi, p_grid);
  add_noise_flags(phi, p_noise);
  add_ic_flags(phi, p_ic);

  // ---- labels --------------------------------------------------------
  auto* labels = app.add_subcommand(
      "labels", "derivative-weight estimators and the transport shortcut");
  IcFlags l_ic;
  double l_x0 = 0.0, l_sigma = 1.0, l_b = 0.0, l_t = 0.5;
  std::vector<double> l_dts = {0.1, 0.05, 0.025};
  std::size_t l_n = 200000;
  std::uint64_t l_seed = 1;
  unsigned l_threads = 0;
  OutputTarget l_out;
  labels->add_option("--x0", l_x0, "expansion point");
  labels->add_option("--sigma-bar", l_sigma, "diffusion variance rate");
  labels->add_option("--b-bar", l_b, "drift");
  labels->add_option("--t", l_t, "transport time for the shortcut check");
  labels->add_option("--dts", l_dts, "step sizes for the weight estimators")
      ->expected(-1);
  labels->add_option("--samples", l_n, "samples per estimator");
  labels->add_option("--seed", l_seed, "master seed");
  labels->add_option("--threads", l_threads, "worker threads");
  labels->add_option("--out", l_out.path, "CSV output path");
  add_ic_flags(labels, l_ic);

  // ---- oracle --------------------------------------------------------
  auto* oracle = app.add_subcommand(
      "oracle", "deterministic reference solutions on the lattice");
  GridFlags o_grid;
  o_grid.t_max = 0.25;
  o_grid.nt = 16;
  IcFlags o_ic;
  NoiseFlags o_noise;
  std::string o_equation = "z";  // z|db1|phi4|kpz-fd|phi4-fd
  double o_lambda = 0.25, o_mu = 1.0, o_t = 0.25, o_sigma = 2.0, o_dt = 0.0;
  std::size_t o_iters = 6;
  std::string o_sign = "minus";
  OutputTarget o_out;
  oracle->add_option("--equation", o_equation,
                     "z | db1 | phi4 (fixed-point) | kpz-fd | phi4-fd")
      ->check(CLI::IsMember({"z", "db1", "phi4", "kpz-fd", "phi4-fd"}));
  oracle->add_option("--lambda", o_lambda, "coupling");
  oracle->add_option("--mu", o_mu, "clock rate (db1)");
  oracle->add_option("--t", o_t, "end time");
  oracle->add_option("--sigma-bar", o_sigma, "diffusion variance rate");
  oracle->add_option("--iters", o_iters, "fixed-point iterations");
  oracle->add_option("--fd-dt", o_dt, "FD time step (0 = auto)");
  oracle->add_option("--noise-sign", o_sign, "minus | plus")
      ->check(CLI::IsMember({"minus", "plus"}));
  oracle->add_option("--out", o_out.path, "CSV output path");
  add_grid_flags(oracle, o_grid);
  add_noise_flags(oracle, o_noise);
  add_ic_flags(oracle, o_ic);

  // ---- suite ---------------------------------------------------------
  auto* suite = app.add_subcommand(
      "suite", "run the full acceptance battery and print one line per check");
  acceptance::SuiteOptions suite_opt;
  suite->add_option("--scale", suite_opt.sample_scale,
                    "multiplier on the battery sample counts");
  suite->add_option("--out-dir", suite_opt.work_dir,
                    "directory for intermediate artifacts");
  suite->add_option("--threads", suite_opt.threads, "worker threads");
  suite->add_flag("--skip-cli-checks", suite_opt.skip_cli_checks,
                  "skip the self-invocation determinism/timing checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*heat) {
      const GridSpec grid = heat_grid.to_spec();
      grid.validate();
      const auto noise = NoiseRealization::zeros(grid);
      DiffusionParams diffusion;
      diffusion.sigma_bar = heat_sigma;
      diffusion.dt_path = heat_dt_path > 0.0
                              ? heat_dt_path
                              : recommended_dt_path(grid, heat_sigma);
      const auto spec = BranchingSpec::pure_diffusion(diffusion);
      const auto ic = heat_ic.build();
      std::vector<EstimateRow> rows;
      for (const double x : heat_x) {
        EstimateRow row;
        row.x = x;
        row.est = estimate(spec, {heat_t, x}, ic, noise,
                           NoiseMode::FixedRealization, heat_n, heat_seed,
                           heat_threads);
        row.oracle = heat_t > 0.0
                         ? oracles::heat_kernel_convolution(ic, heat_t, x,
                                                            heat_sigma)
                         : ic.value(x);
        rows.push_back(row);
      }
      heat_out.write(rows_to_csv(rows) + summary_block(rows));
      return check_finite(rows);
    }

    if (*kpzch) {
      const GridSpec grid = ch_grid.to_spec();
      grid.validate();
      const auto noise = ch_noise.build(grid);
      const auto ic = ch_ic.build();
      KpzChParams params;
      params.lambda = ch_lambda;
      params.t = ch_t;
      params.sigma_bar = ch_sigma;
      params.dt_path = ch_dt_path;

      if (ch_trace > 0)
        print_traces(z_spec(params, grid), ch_x, ch_t, noise,
                     ch_noise.noise_mode(), ch_seed, ch_trace);

      if (ch_lambda0) {
        DiffusionParams diffusion;
        diffusion.sigma_bar = ch_sigma;
        diffusion.dt_path = ch_dt_path > 0.0
                                ? ch_dt_path
                                : recommended_dt_path(grid, ch_sigma);
        std::ostringstream os;
        os << "x,lambda,h_transform,stderr,h_additive,stderr_additive,gap,"
              "bound\n";
        bool finite = true;
        for (const double x : ch_x) {
          params.x = x;
          const auto k8 = stochastic_heat_estimate(ch_t, x, ic, noise,
                                                   diffusion, ch_n, ch_seed,
                                                   ch_threads);
          const double exponent_var =
              k8.stderr_ * k8.stderr_ * double(ch_n);
          for (const double lambda : ch_lambdas) {
            KpzChParams sweep = params;
            sweep.lambda = lambda;
            const auto z = z_exponential_estimate(sweep, ic.exp_scaled(lambda),
                                                  noise, ch_n, ch_seed,
                                                  ch_threads);
            const auto h = h_from_z(z, ch_t, lambda);
            const double gap = h.mean - k8.mean;
            const double bound = 3.0 * h.stderr_ + lambda * exponent_var;
            finite = finite && std::isfinite(h.mean);
            os << fmt(x) << ',' << fmt(lambda) << ',' << fmt(h.mean) << ','
               << fmt(h.stderr_) << ',' << fmt(k8.mean) << ','
               << fmt(k8.stderr_) << ',' << fmt(gap) << ',' << fmt(bound)
               << '\n';
          }
        }
        ch_out.write(os.str());
        return finite ? kExitOk : kExitNumeric;
      }

      if (ch_compare_k6) {
        std::ostringstream os;
        os << "x,mean_branching,stderr_branching,mean_exponential,"
              "stderr_exponential,n,abs_diff,sigma_combined,diff_over_sigma\n";
        bool finite = true;
        for (const double x : ch_x) {
          params.x = x;
          const auto a =
              z_branching_estimate(params, ic, noise, ch_noise.noise_mode(),
                                   ch_n, ch_seed, ch_threads);
          const auto b = z_exponential_estimate(params, ic, noise, ch_n,
                                                ch_seed + 1, ch_threads);
          const double diff = std::fabs(a.mean - b.mean);
          const double sigma = std::sqrt(a.stderr_ * a.stderr_ +
                                         b.stderr_ * b.stderr_);
          finite = finite && std::isfinite(a.mean) && std::isfinite(b.mean);
          os << fmt(x) << ',' << fmt(a.mean) << ',' << fmt(a.stderr_) << ','
             << fmt(b.mean) << ',' << fmt(b.stderr_) << ',' << ch_n << ','
             << fmt(diff) << ',' << fmt(sigma) << ','
             << fmt(sigma > 0 ? diff / sigma : 0.0) << '\n';
        }
        ch_out.write(os.str());
        return finite ? kExitOk : kExitNumeric;
      }

      // Single-estimator runs; lambda = 0 with --recover-h routes to the
      // additive-noise limit directly.
      std::vector<EstimateRow> rows;
      for (const double x : ch_x) {
        params.x = x;
        EstimateRow row;
        row.x = x;
        if (ch_recover_h && ch_lambda == 0.0) {
          DiffusionParams diffusion;
          diffusion.sigma_bar = ch_sigma;
          diffusion.dt_path = ch_dt_path > 0.0
                                  ? ch_dt_path
                                  : recommended_dt_path(grid, ch_sigma);
          row.est = stochastic_heat_estimate(ch_t, x, ic, noise, diffusion,
                                             ch_n, ch_seed, ch_threads);
        } else {
          const auto z =
              ch_estimator == "exponential"
                  ? z_exponential_estimate(params, ic, noise, ch_n, ch_seed,
                                           ch_threads)
                  : z_branching_estimate(params, ic, noise,
                                         ch_noise.noise_mode(), ch_n, ch_seed,
                                         ch_threads);
          row.est = ch_recover_h ? h_from_z(z, ch_t, ch_lambda) : z;
        }
        rows.push_back(row);
      }
      ch_out.write(rows_to_csv(rows) + summary_block(rows));
      return check_finite(rows);
    }

    if (*kpzd) {
      const GridSpec grid = d_grid.to_spec();
      grid.validate();
      const auto noise = d_noise.build(grid);
      const auto ic = d_ic.build();
      Db1Params params;
      params.lambda = d_lambda;
      params.mu = d_mu;
      params.t = d_t;
      params.sigma_bar = d_sigma;
      params.dt_path = d_dt_path;
      params.noise_sign =
          d_sign == "plus" ? NoiseSign::PlusXi : NoiseSign::MinusXi;

      if (d_trace > 0)
        print_traces(db1_spec(params, grid), d_x, d_t, noise,
                     d_noise.noise_mode(), d_seed, d_trace);

      if (d_cross) {
        std::ostringstream os;
        os << "x,h_direct,stderr_direct,h_cole_hopf,stderr_cole_hopf,z_mean,"
              "discrepancy,sigma_combined\n";
        bool finite = true;
        for (const double x : d_x) {
          params.x = x;
          const auto rep =
              cross_check_cole_hopf(params, ic, noise, d_n, d_seed, d_threads);
          finite = finite && std::isfinite(rep.direct.mean) &&
                   std::isfinite(rep.cole_hopf.mean);
          os << fmt(x) << ',' << fmt(rep.direct.mean) << ','
             << fmt(rep.direct.stderr_) << ',' << fmt(rep.cole_hopf.mean)
             << ',' << fmt(rep.cole_hopf.stderr_) << ',' << fmt(rep.z_mean)
             << ',' << fmt(rep.discrepancy) << ',' << fmt(rep.combined_stderr)
             << '\n';
        }
        d_out.write(os.str());
        return finite ? kExitOk : kExitNumeric;
      }

      std::vector<EstimateRow> rows;
      const bool zero_noise = d_noise.kind == "zero" && d_noise.load_path.empty();
      std::optional<oracles::GridFunction> fd;
      if (zero_noise && d_t > 0.0) {
        oracles::FdOptions fopt;
        fopt.equation = oracles::FdEquation::KpzNoiseless;
        fopt.lambda = d_lambda;
        fopt.sigma_bar = d_sigma;
        fopt.t_end = d_t;
        GridSpec fine = grid;
        fine.nx = std::max<std::size_t>(grid.nx, 256);
        fd = oracles::fd_integrate(fopt, ic, fine);
      }
      for (const double x : d_x) {
        params.x = x;
        EstimateRow row;
        row.x = x;
        Db1Params run = params;
        run.dt_path = d_dt_path;
        BranchingSpec spec = db1_spec(run, grid);
        spec.max_events = d_max_events;
        spec.max_label_order = d_max_label;
        row.est = estimate(spec, {d_t, x}, ic, noise, d_noise.noise_mode(),
                           d_n, d_seed, d_threads);
        if (fd) row.oracle = fd->value_at(x);
        rows.push_back(row);
      }
      d_out.write(rows_to_csv(rows) + summary_block(rows));
      return check_finite(rows);
    }

    if (*phi) {
      const GridSpec grid = p_grid.to_spec();
      grid.validate();
      const auto noise = p_noise.build(grid);
      const auto ic = p_ic.build();
      Db2Params params;
      params.t = p_t;
      params.sigma_bar = p_sigma;
      params.dt_path = p_dt_path;
      params.noise_sign =
          p_sign == "minus" ? NoiseSign::MinusXi : NoiseSign::PlusXi;

      if (p_trace > 0)
        print_traces(db2_spec(params, grid), p_x, p_t, noise,
                     p_noise.noise_mode(), p_seed, p_trace);

      const bool zero_noise = p_noise.kind == "zero" && p_noise.load_path.empty();
      std::optional<oracles::GridFunction> fd;
      if (zero_noise && p_t > 0.0) {
        oracles::FdOptions fopt;
        fopt.equation = oracles::FdEquation::Phi4Noiseless;
        fopt.sigma_bar = p_sigma;
        fopt.t_end = p_t;
        GridSpec fine = grid;
        fine.nx = std::max<std::size_t>(grid.nx, 256);
        fd = oracles::fd_integrate(fopt, ic, fine);
      }
      std::vector<EstimateRow> rows;
      for (const double x : p_x) {
        params.x = x;
        BranchingSpec spec = db2_spec(params, grid);
        spec.max_events = p_max_events;
        EstimateRow row;
        row.x = x;
        row.est = estimate(spec, {p_t, x}, ic, noise, p_noise.noise_mode(),
                           p_n, p_seed, p_threads);
        if (fd) row.oracle = fd->value_at(x);
        rows.push_back(row);
      }
      p_out.write(rows_to_csv(rows) + summary_block(rows));
      return check_finite(rows);
    }

    if (*labels) {
      const auto ic = l_ic.build();
      DiffusionParams dparams;
      dparams.sigma_bar = l_sigma;
      dparams.b_bar = l_b;
      dparams.dt_path = 1.0;
      std::ostringstream os;
      os << "item,order,dt,mean,stderr,exact,abs_err\n";
      bool finite = true;
      for (const int order : {1, 2}) {
        for (const double dt : l_dts) {
          const auto est = estimate_derivative(order, ic, l_x0, dparams, dt,
                                               l_n, l_seed, l_threads);
          const double exact = ic.has_closed_heat_image()
                                   ? ic.heat_evolved(l_sigma * dt)
                                         .derivative(order, l_x0 + l_b * dt)
                                   : std::numeric_limits<double>::quiet_NaN();
          finite = finite && std::isfinite(est.mean);
          os << "weight_estimate," << order << ',' << fmt(dt) << ','
             << fmt(est.mean) << ',' << fmt(est.stderr_) << ',' << fmt(exact)
             << ',' << fmt(std::fabs(est.mean - exact)) << '\n';
        }
      }
      if (ic.has_closed_heat_image()) {
        for (const int order : {1, 2}) {
          const auto rep = shortcut_consistency_check(ic, order, l_t, dparams,
                                                      l_n, l_seed, l_threads);
          os << "shortcut," << order << ',' << fmt(l_t) << ','
             << fmt(rep.shortcut.mean) << ',' << fmt(rep.shortcut.stderr_)
             << ',' << fmt(rep.exact) << ',' << fmt(rep.diff) << '\n';
        }
        const auto gap = functional_label_gap(ic, l_t, dparams, l_n, l_seed,
                                              l_threads);
        os << "functional_label_gap,2," << fmt(l_t) << ','
           << fmt(gap.endpoint_mc.mean) << ',' << fmt(gap.endpoint_mc.stderr_)
           << ',' << fmt(gap.f_of_solution) << ',' << fmt(gap.gap) << '\n';
      }
      l_out.write(os.str());
      return finite ? kExitOk : kExitNumeric;
    }

    if (*oracle) {
      const GridSpec grid = o_grid.to_spec();
      grid.validate();
      const auto ic = o_ic.build();
      const NoiseSign sign =
          o_sign == "plus" ? NoiseSign::PlusXi : NoiseSign::MinusXi;
      oracles::GridFunction result;
      if (o_equation == "kpz-fd" || o_equation == "phi4-fd") {
        oracles::FdOptions fopt;
        fopt.equation = o_equation == "kpz-fd"
                            ? oracles::FdEquation::KpzNoiseless
                            : oracles::FdEquation::Phi4Noiseless;
        fopt.lambda = o_lambda;
        fopt.sigma_bar = o_sigma;
        fopt.t_end = o_t;
        fopt.dt = o_dt;
        result = oracles::fd_integrate(fopt, ic, grid);
      } else {
        const auto noise = o_noise.build(grid);
        oracles::PicardOptions popt;
        popt.equation = o_equation == "z" ? oracles::PicardEquation::Z
                        : o_equation == "db1"
                            ? oracles::PicardEquation::DB1
                            : oracles::PicardEquation::Phi4;
        popt.ic = ic;
        popt.lambda = o_lambda;
        popt.mu = o_mu;
        popt.noise_sign = sign;
        popt.sigma_bar = o_sigma;
        popt.t_end = o_t;
        popt.n_iters = o_iters;
        result = oracles::picard_iterate(popt, noise).solution;
      }
      std::ostringstream os;
      result.write_csv(os);
      o_out.write(os.str());
      return kExitOk;
    }

    if (*suite) {
      if (suite_opt.cli_path.empty()) suite_opt.cli_path = argv[0];
      const auto results = acceptance::run_all(suite_opt);
      bool all_pass = true;
      for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.id << ". "
                  << r.name << "  [" << r.detail << "]\n";
        all_pass = all_pass && r.pass;
      }
      std::cout << (all_pass ? "SUITE PASS" : "SUITE FAIL") << '\n';
      return all_pass ? kExitOk : kExitNumeric;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}
