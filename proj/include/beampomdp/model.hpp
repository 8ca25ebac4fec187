// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "beampomdp/channel_dynamics.hpp"
#include "beampomdp/config.hpp"
#include "beampomdp/sensing.hpp"

namespace beampomdp {

/// Everything the belief engine and the solvers need: state, action and
/// observation spaces, the transition and detector models, and the cached
/// per-action expected reward vectors.
///
/// Immutable after construction and safe to share between threads.
class PomdpModel {
 public:
  PomdpModel(const ChannelConfig& cfg, TransitionModel tm, DetectorModel detector);

  /// Banded transition from (n_tx, beta, band) and the default detector.
  static PomdpModel from_config(const ChannelConfig& cfg);

  const ChannelConfig& config() const { return cfg_; }
  const StateSpace& states() const { return states_; }
  const ActionSpace& actions() const { return actions_; }
  const TransitionModel& transition() const { return tm_; }
  const DetectorModel& detector() const { return detector_; }
  RewardKind reward_kind() const { return cfg_.reward; }

  std::size_t n_states() const { return states_.size(); }
  std::size_t n_observations() const { return std::size_t{1} << cfg_.n_pilots; }

  /// R(a) indexed by pre-transition state.
  std::span<const double> reward_vector(std::size_t action) const;

  /// out = P_composite * v, i.e. out[n] = sum_i p(n, i) v[i].
  void apply_transition(std::span<const double> v, std::span<double> out) const;
  /// out = P_composite^T * pi, i.e. belief prediction.
  void apply_transition_transposed(std::span<const double> pi, std::span<double> out) const;

  /// q(state, obs | action) with observation given by its bit pattern.
  double obs_prob(std::size_t state, std::size_t action, std::uint32_t obs) const;
  /// out[s] = q(s, obs | action) for every state.
  void obs_likelihood(std::size_t action, std::uint32_t obs, std::span<double> out) const;

  /// Expected slot reward in post-transition state `state` under `action`
  /// (the inner two sums of R(s, a)).
  double post_transition_reward(std::size_t state, std::size_t action) const;

  /// Slot reward for a detected-bin count.
  double reward_for_bins(int detected_bins) const;

  /// Hash of everything that shapes the decision problem: sizes, reward
  /// kind, the transition matrix and the detector table. Seed, prior and
  /// horizon are excluded, so one solved policy serves every run of it.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  ChannelConfig cfg_;
  TransitionModel tm_;
  DetectorModel detector_;
  StateSpace states_;
  ActionSpace actions_;
  std::vector<double> rewards_;  // |A| x N
  std::uint64_t fingerprint_ = 0;
};

}  // namespace beampomdp
