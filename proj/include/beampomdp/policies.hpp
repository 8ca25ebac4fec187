// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "beampomdp/belief.hpp"
#include "beampomdp/model.hpp"
#include "beampomdp/rng.hpp"
#include "beampomdp/solver.hpp"

namespace beampomdp {

/// Pilot selection strategy. An instance is a per-episode cursor: the
/// harness clones a prototype for each episode and drives it through
/// begin_episode / choose / observe.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual std::string name() const = 0;

  /// Called once with the true initial state before slot 1.
  virtual void begin_episode(const CompositeState& /*initial*/) {}

  /// Action for slot k (1-based) given the pre-transition belief.
  virtual ActionVector choose(const Belief& belief, int k, Rng& rng) = 0;

  /// Feedback for the slot just played.
  virtual void observe(const ActionVector& /*action*/, const SenseResult& /*feedback*/) {}
};

/// argmax_a <R(a), belief>; ties (within 1e-12) to the lexicographically
/// smallest action. Uses the per-column decomposition of the reward.
ActionVector greedy_action(const Belief& belief, const PomdpModel& model);

/// Uniform draw over all C(n_tx, n_pilots) actions.
ActionVector random_action(const ActionSpace& actions, Rng& rng);

/// Pilot columns for one tracked path anchored at `col`: the columns j
/// ordered by p(col, j) descending, then |j - col|, then j.
std::vector<int> tracking_order(const TransitionModel& tm, int col);

/// Per-path tracker state: the column each path was last seen in and the
/// pilot columns assigned to it in the previous slot.
struct TrackerState {
  std::vector<int> anchors;
  std::vector<bool> detected;
  std::vector<std::vector<int>> pilots;
};

/// One tracker decision. Detected paths get their floor(M_p / L) most
/// probable next columns; missed paths reuse their previous pilots.
/// Collisions between paths are resolved by walking further down each
/// path's ranking (round robin, path 0 first) until M_p distinct columns
/// are chosen. Updates state.pilots with the final assignment.
ActionVector heuristic_tracker(TrackerState& state, const TransitionModel& tm, int n_pilots);

class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(std::shared_ptr<const PomdpModel> model) : model_(std::move(model)) {}
  std::unique_ptr<Policy> clone() const override { return std::make_unique<GreedyPolicy>(*this); }
  std::string name() const override { return "greedy"; }
  ActionVector choose(const Belief& belief, int k, Rng& rng) override;

 private:
  std::shared_ptr<const PomdpModel> model_;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::shared_ptr<const PomdpModel> model) : model_(std::move(model)) {}
  std::unique_ptr<Policy> clone() const override { return std::make_unique<RandomPolicy>(*this); }
  std::string name() const override { return "random"; }
  ActionVector choose(const Belief& belief, int k, Rng& rng) override;

 private:
  std::shared_ptr<const PomdpModel> model_;
};

class OptimalPolicy final : public Policy {
 public:
  /// Throws std::invalid_argument if the vector set does not match the model
  /// (state count, action count or config hash) or covers fewer slots than
  /// the model's horizon.
  OptimalPolicy(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const AlphaVectorSet> avs);
  std::unique_ptr<Policy> clone() const override { return std::make_unique<OptimalPolicy>(*this); }
  std::string name() const override { return "optimal"; }
  ActionVector choose(const Belief& belief, int k, Rng& rng) override;

 private:
  std::shared_ptr<const PomdpModel> model_;
  std::shared_ptr<const AlphaVectorSet> avs_;
};

/// Splits pilots among paths and follows the last detections. Ignores the
/// belief.
class TrackerPolicy final : public Policy {
 public:
  explicit TrackerPolicy(std::shared_ptr<const PomdpModel> model) : model_(std::move(model)) {}
  std::unique_ptr<Policy> clone() const override { return std::make_unique<TrackerPolicy>(*this); }
  std::string name() const override { return "tracker"; }
  void begin_episode(const CompositeState& initial) override;
  ActionVector choose(const Belief& belief, int k, Rng& rng) override;
  void observe(const ActionVector& action, const SenseResult& feedback) override;

  const TrackerState& state() const { return state_; }

 private:
  std::shared_ptr<const PomdpModel> model_;
  TrackerState state_;
};

}  // namespace beampomdp
