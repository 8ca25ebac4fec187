// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------
//
// Belief filtering over composite states. A belief is the distribution of
// the state at the start of a slot, before that slot's transition.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beampomdp/model.hpp"

namespace beampomdp {

class Belief {
 public:
  /// Throws std::invalid_argument unless entries are >= 0 and sum to 1
  /// within 1e-10.
  explicit Belief(std::vector<double> probs);

  static Belief uniform(std::size_t n);
  static Belief point_mass(std::size_t n, std::size_t state);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  /// Shannon entropy in nats.
  double entropy() const;

 private:
  struct Unchecked {};
  Belief(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}
  friend Belief make_belief_unchecked(std::vector<double> probs);

  std::vector<double> probs_;
};

/// Wraps a vector the caller has already normalised (internal fast path).
Belief make_belief_unchecked(std::vector<double> probs);

/// Belief after the slot transition: pi * P_composite.
Belief predict(const Belief& belief, const PomdpModel& model);

/// Bayes posterior over the post-transition state after (action, obs); this
/// is the next slot's pre-transition belief. Throws ZeroProbabilityObservation
/// if the observation's marginal is below 1e-300.
Belief update_belief(const Belief& belief, const ActionVector& action,
                     const ObservationVector& obs, const PomdpModel& model);

/// Pr{obs | belief, action}, the Bayes normaliser.
double observation_marginal(const Belief& belief, const ActionVector& action,
                            const ObservationVector& obs, const PomdpModel& model);

/// R(a) over pre-transition states.
std::vector<double> expected_reward_vector(const ActionVector& action, const PomdpModel& model);

/// <R(a), belief>.
double expected_reward(const Belief& belief, const ActionVector& action, const PomdpModel& model);

/// r(s, a, o): reward of one slot given the post-transition state.
double slot_reward(const CompositeState& state, const ActionVector& action,
                   const ObservationVector& obs, const PomdpModel& model);

}  // namespace beampomdp
