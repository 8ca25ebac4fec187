// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace beampomdp {

namespace {

constexpr double kTieTolerance = 1e-12;

ActionVector greedy_by_enumeration(const Belief& belief, const PomdpModel& model) {
  const auto& actions = model.actions();
  std::vector<double> values(actions.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const auto r = model.reward_vector(a);
    values[a] = std::inner_product(r.begin(), r.end(), belief.probs().begin(), 0.0);
    best = std::max(best, values[a]);
  }
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (values[a] >= best - kTieTolerance) return actions[a];
  }
  return actions[0];
}

}  // namespace

ActionVector greedy_action(const Belief& belief, const PomdpModel& model) {
  if (belief.size() != model.n_states()) throw std::invalid_argument("belief length does not match the model");
  if (model.reward_kind() != RewardKind::path_count) return greedy_by_enumeration(belief, model);

  // The path-count reward is a sum over sensed columns, so the best action
  // is the M_p columns with the largest expected detected-bin counts.
  const Belief predicted = predict(belief, model);
  const auto& states = model.states();
  const auto& det = model.detector();
  const int n_tx = states.n_tx();
  std::vector<double> score(static_cast<std::size_t>(n_tx), 0.0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    const double p = predicted[s];
    if (p == 0.0) continue;
    for (int l = 0; l < states.n_paths(); ++l) {
      const int col = states.column(s, l);
      // Each path in the column contributes d(k) once, k = column occupancy.
      score[col] += p * det.detect(states.occupancy(s, col));
    }
  }

  std::vector<bool> taken(score.size(), false);
  std::vector<int> cols;
  for (int m = 0; m < model.config().n_pilots; ++m) {
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_tx; ++c) {
      if (!taken[c]) best = std::max(best, score[c]);
    }
    for (int c = 0; c < n_tx; ++c) {
      if (!taken[c] && score[c] >= best - kTieTolerance) {
        taken[c] = true;
        cols.push_back(c);
        break;
      }
    }
  }
  std::sort(cols.begin(), cols.end());
  return ActionVector{std::move(cols)};
}

ActionVector random_action(const ActionSpace& actions, Rng& rng) {
  return actions[static_cast<std::size_t>(uniform_index(rng, static_cast<int>(actions.size())))];
}

std::vector<int> tracking_order(const TransitionModel& tm, int col) {
  std::vector<int> order(static_cast<std::size_t>(tm.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double pa = tm(col, a);
    const double pb = tm(col, b);
    if (pa != pb) return pa > pb;
    const int da = std::abs(a - col);
    const int db = std::abs(b - col);
    if (da != db) return da < db;
    return a < b;
  });
  return order;
}

ActionVector heuristic_tracker(TrackerState& state, const TransitionModel& tm, int n_pilots) {
  const int paths = static_cast<int>(state.anchors.size());
  if (paths < 1 || n_pilots < paths || n_pilots > tm.size()) {
    throw std::invalid_argument("tracker needs 1 <= n_paths <= n_pilots <= n_tx");
  }
  state.detected.resize(static_cast<std::size_t>(paths), true);
  state.pilots.resize(static_cast<std::size_t>(paths));
  const int quota = n_pilots / paths;

  std::vector<std::vector<int>> ranked(static_cast<std::size_t>(paths));
  for (int l = 0; l < paths; ++l) {
    auto& list = ranked[l];
    const auto order = tracking_order(tm, state.anchors[l]);
    if (!state.detected[l]) list = state.pilots[l];
    for (int c : order) {
      if (std::find(list.begin(), list.end(), c) == list.end()) list.push_back(c);
    }
  }

  std::vector<bool> chosen(static_cast<std::size_t>(tm.size()), false);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(paths), 0);
  std::vector<std::vector<int>> assigned(static_cast<std::size_t>(paths));
  int total = 0;
  auto take_next = [&](int l) {
    auto& list = ranked[l];
    while (cursor[l] < list.size() && chosen[list[cursor[l]]]) ++cursor[l];
    if (cursor[l] == list.size()) return false;
    const int c = list[cursor[l]++];
    chosen[c] = true;
    assigned[l].push_back(c);
    ++total;
    return true;
  };

  for (int l = 0; l < paths; ++l) {
    while (static_cast<int>(assigned[l].size()) < quota && take_next(l)) {
    }
  }
  for (int l = 0; total < n_pilots; l = (l + 1) % paths) take_next(l);

  state.pilots = assigned;
  std::vector<int> cols;
  for (const auto& a : assigned) cols.insert(cols.end(), a.begin(), a.end());
  std::sort(cols.begin(), cols.end());
  return ActionVector{std::move(cols)};
}

ActionVector GreedyPolicy::choose(const Belief& belief, int /*k*/, Rng& /*rng*/) {
  return greedy_action(belief, *model_);
}

ActionVector RandomPolicy::choose(const Belief& /*belief*/, int /*k*/, Rng& rng) {
  return random_action(model_->actions(), rng);
}

OptimalPolicy::OptimalPolicy(std::shared_ptr<const PomdpModel> model, std::shared_ptr<const AlphaVectorSet> avs)
    : model_(std::move(model)), avs_(std::move(avs)) {
  if (avs_->n_states() != model_->n_states() || avs_->n_actions() != model_->actions().size()) {
    throw std::invalid_argument("policy file was solved for a different state or action space");
  }
  if (avs_->config_hash() != model_->fingerprint()) {
    throw std::invalid_argument("policy file was solved for a different model (config hash mismatch)");
  }
  if (avs_->horizon() < model_->config().horizon) {
    throw std::invalid_argument("policy horizon " + std::to_string(avs_->horizon()) + " is shorter than the " +
                                std::to_string(model_->config().horizon) + "-slot episode");
  }
}

ActionVector OptimalPolicy::choose(const Belief& belief, int k, Rng& /*rng*/) {
  // A policy solved for horizon H plays its last T slots.
  return optimal_action(belief, k + avs_->horizon() - model_->config().horizon, *avs_, *model_);
}

void TrackerPolicy::begin_episode(const CompositeState& initial) {
  state_.anchors = initial.cols;
  state_.detected.assign(initial.cols.size(), true);
  state_.pilots.assign(initial.cols.size(), {});
}

ActionVector TrackerPolicy::choose(const Belief& /*belief*/, int /*k*/, Rng& /*rng*/) {
  return heuristic_tracker(state_, model_->transition(), model_->config().n_pilots);
}

void TrackerPolicy::observe(const ActionVector& action, const SenseResult& feedback) {
  const auto& tm = model_->transition();
  for (std::size_t l = 0; l < state_.anchors.size(); ++l) {
    int best_col = -1;
    double best_gain = -1.0;
    double best_prob = -1.0;
    for (std::size_t m = 0; m < action.size(); ++m) {
      const int col = action.cols[m];
      if (!feedback.obs[static_cast<int>(m)]) continue;
      const auto& mine = state_.pilots[l];
      if (std::find(mine.begin(), mine.end(), col) == mine.end()) continue;
      // Strongest fed-back bin in the column, then the likelier move.
      double gain = 0.0;
      for (const auto& g : feedback.gains) {
        if (g.col == col) gain = std::max(gain, std::abs(g.value));
      }
      const double prob = tm(state_.anchors[l], col);
      if (gain > best_gain || (gain == best_gain && prob > best_prob)) {
        best_col = col;
        best_gain = gain;
        best_prob = prob;
      }
    }
    state_.detected[l] = best_col >= 0;
    if (best_col >= 0) state_.anchors[l] = best_col;
  }
}

}  // namespace beampomdp
