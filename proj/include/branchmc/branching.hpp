#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "branchmc/diffusion.hpp"
#include "branchmc/initial_condition.hpp"
#include "branchmc/mc.hpp"
#include "branchmc/noise_field.hpp"

namespace branchmc {

// One entry of a branch-type menu. When the clock rings, a rule is picked by
// its probability; the event multiplies the tree functional by `weight`
// (times the sampled noise value when samples_noise is set) and spawns
// `offspring` particles whose derivative label grows by label_increment.
//
// samples_noise with offspring == 1 is the "continue with noise" rule of the
// multiplicative-noise process: the particle samples the driving term and
// keeps going on the same path.
struct BranchTypeRule {
  std::string name;
  double probability = 0.0;
  int offspring = 0;
  double weight = 1.0;
  bool samples_noise = false;
  int label_increment = 0;
};

struct BranchingSpec {
  double clock_rate = 1.0;  // 0 disables branching (pure diffusion)
  std::vector<BranchTypeRule> rules;
  DiffusionParams diffusion;
  std::size_t max_events = 10000;
  int max_label_order = 8;

  void validate() const;  // throws std::invalid_argument
  static BranchingSpec pure_diffusion(const DiffusionParams& params);
};

struct TreeEvent {
  double s = 0.0;  // elapsed backward time from the root
  double x = 0.0;
  int rule = 0;
  double weight = 1.0;  // scalar factor applied at this event (noise excluded)
};

struct NoiseLeaf {
  double s = 0.0;  // strictly inside (0, root.t)
  double x = 0.0;
  double value = 0.0;
};

struct IcLeaf {
  double x = 0.0;
  int label_order = 0;  // derivative order applied to the initial condition
};

struct SampleTree {
  SpaceTimePoint root;
  std::vector<TreeEvent> events;
  std::vector<NoiseLeaf> noise_leaves;
  std::vector<IcLeaf> ic_leaves;
  bool truncated = false;
};

struct FunctionalValue {
  double value = 0.0;
  int n_events = 0;
  int n_noise = 0;
};

// Depth-first growth of one backward-in-time tree. Each live particle
// diffuses for a clock-drawn duration; survival to physical time zero makes
// an initial-condition leaf, a branch applies one rule. Hitting max_events
// or max_label_order freezes the remaining particles (they diffuse straight
// to time zero without further events) and marks the tree truncated.
SampleTree grow_tree(const BranchingSpec& spec, SpaceTimePoint root,
                     const NoiseRealization& noise, NoiseMode mode,
                     RngStream& rng);

// Product of event weights, sampled noise values, and derivative-labelled
// initial-condition values at the leaves.
FunctionalValue evaluate(const SampleTree& tree, const InitialCondition& ic);

// Monte Carlo mean over n independent trees, each driven by the stream
// (master_seed, sample index). Pure function of its arguments: thread count
// and scheduling never change the result.
Estimate estimate(const BranchingSpec& spec, SpaceTimePoint point,
                  const InitialCondition& ic, const NoiseRealization& noise,
                  NoiseMode mode, std::size_t n_samples,
                  std::uint64_t master_seed, unsigned threads = 0);

}  // namespace branchmc
