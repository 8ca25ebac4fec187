// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "beampomdp/belief.hpp"
#include "beampomdp/model.hpp"
#include "beampomdp/policies.hpp"
#include "beampomdp/rng.hpp"

namespace beampomdp {

struct SlotRecord {
  std::size_t state = 0;  // post-transition true state
  ActionVector action;
  ObservationVector obs;
  double reward = 0.0;
  double belief_entropy = 0.0;  // of the belief the action was chosen from
};

struct EpisodeLog {
  std::size_t initial_state = 0;
  std::vector<SlotRecord> slots;
  std::vector<double> accumulated;

  /// Beliefs before each slot (T + 1 entries) when requested.
  std::vector<std::vector<double>> beliefs;
};

struct EpisodeOptions {
  bool keep_beliefs = false;
};

/// Plays one T-slot episode: for each slot the true state moves, the policy
/// picks pilots from the current belief, the receiver senses, the reward is
/// credited against the post-transition state, and the belief is updated.
EpisodeLog run_episode(const PomdpModel& model, Policy& policy, Rng& rng,
                       const EpisodeOptions& options = {});

struct RunSummary {
  std::vector<double> mean_reward;
  std::vector<double> ci95;
  std::vector<double> accum_reward;
  std::vector<double> accum_ci95;
  std::size_t episodes = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// Seeded Monte Carlo over independent episodes. Episode e draws from
/// make_substream(seed, e), so results do not depend on `workers`.
RunSummary monte_carlo(const PomdpModel& model, const Policy& policy, std::size_t episodes,
                       int workers, std::uint64_t seed);

/// `slot,mean_reward,ci95,accum_reward`, one row per slot.
void write_csv(std::ostream& out, const RunSummary& summary);

/// Exhaustive (action, observation) decision tree with exact belief updates.
/// Throws BudgetExceeded when (|A| * |O|)^T > max_leaves.
double brute_force_value(const PomdpModel& model, const Belief& initial, int horizon,
                         double max_leaves = 1e7);

/// Root action of the decision tree together with its value; ties go to the
/// lexicographically smallest action.
struct TreeDecision {
  std::size_t action = 0;
  double value = 0.0;
  /// Gap between the best and second-best root action values.
  double margin = 0.0;
};
TreeDecision brute_force_decision(const PomdpModel& model, const Belief& initial, int horizon,
                                  double max_leaves = 1e7);

}  // namespace beampomdp
