#include "branchmc/branching.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace branchmc {

void BranchingSpec::validate() const {
  diffusion.validate();
  if (clock_rate < 0.0)
    throw std::invalid_argument("BranchingSpec: negative clock rate");
  if (max_events == 0 || max_label_order < 0)
    throw std::invalid_argument("BranchingSpec: caps must be positive");
  if (clock_rate == 0.0) {
    if (!rules.empty())
      throw std::invalid_argument(
          "BranchingSpec: rules given but clock_rate is 0");
    return;
  }
  if (rules.empty())
    throw std::invalid_argument("BranchingSpec: clock running with no rules");
  double total = 0.0;
  for (const auto& r : rules) {
    if (r.probability < 0.0 || r.probability > 1.0)
      throw std::invalid_argument("BranchTypeRule: probability outside [0,1]");
    if (r.offspring < 0)
      throw std::invalid_argument("BranchTypeRule: negative offspring");
    if (r.label_increment < 0)
      throw std::invalid_argument("BranchTypeRule: negative label increment");
    if (r.offspring == 0 && !r.samples_noise)
      throw std::invalid_argument(
          "BranchTypeRule: terminal rule must sample noise");
    if (r.samples_noise && r.offspring > 1)
      throw std::invalid_argument(
          "BranchTypeRule: noise sampling with offspring > 1");
    total += r.probability;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "BranchingSpec: rule probabilities must sum to 1");
}

BranchingSpec BranchingSpec::pure_diffusion(const DiffusionParams& params) {
  BranchingSpec spec;
  spec.clock_rate = 0.0;
  spec.diffusion = params;
  return spec;
}

namespace {

std::size_t pick_rule(const std::vector<BranchTypeRule>& rules, double u) {
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < rules.size(); ++i) {
    cum += rules[i].probability;
    if (u < cum) return i;
  }
  return rules.size() - 1;
}

struct Particle {
  double s = 0.0;  // elapsed backward time at birth
  double x = 0.0;
  int label = 0;
  bool frozen = false;  // past a cap: diffuse to time zero, no more events
};

}  // namespace

SampleTree grow_tree(const BranchingSpec& spec, SpaceTimePoint root,
                     const NoiseRealization& noise, NoiseMode mode,
                     RngStream& rng) {
  if (root.t < 0.0) throw std::invalid_argument("grow_tree: negative root time");
  if (root.t > noise.spec().t_max)
    throw std::invalid_argument("grow_tree: root time beyond the noise horizon");

  SampleTree tree;
  tree.root = root;

  std::vector<Particle> live;
  live.push_back({0.0, root.x, 0, false});
  DiffusionPath scratch;

  while (!live.empty()) {
    const Particle p = live.back();
    live.pop_back();
    const double remaining = root.t - p.s;

    ClockOutcome clock{false, remaining};
    if (spec.clock_rate > 0.0 && !p.frozen && remaining > 0.0) {
      if (tree.events.size() >= spec.max_events)
        tree.truncated = true;  // budget exhausted: force-survive
      else
        clock = draw_clock(spec.clock_rate, remaining, rng);
    }

    simulate_segment({remaining, p.x}, clock.s, spec.diffusion, rng, scratch);
    const double y = scratch.endpoint();

    if (!clock.branched) {
      tree.ic_leaves.push_back({y, p.label});
      continue;
    }

    const double s_event = p.s + clock.s;
    const double t_phys = root.t - s_event;
    const auto r = pick_rule(spec.rules, rng.uniform());
    const auto& rule = spec.rules[r];
    tree.events.push_back({s_event, y, static_cast<int>(r), rule.weight});

    if (rule.samples_noise) {
      const double xi = event_noise(noise, mode, t_phys, y, rng);
      tree.noise_leaves.push_back({s_event, y, xi});
    }

    bool freeze_children = false;
    const int child_label = p.label + rule.label_increment;
    if (rule.offspring > 0 && child_label > spec.max_label_order) {
      tree.truncated = true;
      freeze_children = true;
    }
    for (int o = 0; o < rule.offspring; ++o)
      live.push_back({s_event, y, child_label, freeze_children});
  }
  return tree;
}

FunctionalValue evaluate(const SampleTree& tree, const InitialCondition& ic) {
  FunctionalValue out;
  out.n_events = static_cast<int>(tree.events.size());
  out.n_noise = static_cast<int>(tree.noise_leaves.size());
  double v = 1.0;
  for (const auto& e : tree.events) v *= e.weight;
  for (const auto& leaf : tree.noise_leaves) v *= leaf.value;
  for (const auto& leaf : tree.ic_leaves)
    v *= ic.derivative(leaf.label_order, leaf.x);
  out.value = v;
  return out;
}

Estimate estimate(const BranchingSpec& spec, SpaceTimePoint point,
                  const InitialCondition& ic, const NoiseRealization& noise,
                  NoiseMode mode, std::size_t n_samples,
                  std::uint64_t master_seed, unsigned threads) {
  spec.validate();
  if (n_samples < 1) throw std::invalid_argument("estimate: n_samples < 1");

  std::vector<double> values(n_samples);
  std::atomic<std::size_t> truncated{0};
  parallel_for_samples(n_samples, threads, [&](std::size_t i) {
    RngStream stream(master_seed, i);
    const SampleTree tree = grow_tree(spec, point, noise, mode, stream);
    values[i] = evaluate(tree, ic).value;
    if (tree.truncated) truncated.fetch_add(1, std::memory_order_relaxed);
  });
  return summarize(values, truncated.load());
}

}  // namespace branchmc
