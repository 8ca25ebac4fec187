// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/belief.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "beampomdp/errors.hpp"

namespace beampomdp {

namespace {

constexpr double kMinMarginal = 1e-300;

void check_belief(const Belief& belief, const PomdpModel& model) {
  if (belief.size() != model.n_states()) throw std::invalid_argument("belief length does not match the model");
}

}  // namespace

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("belief is empty");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("belief has a negative or NaN entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw std::invalid_argument("belief does not sum to one");
}

Belief Belief::uniform(std::size_t n) {
  return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n)), Unchecked{});
}

Belief Belief::point_mass(std::size_t n, std::size_t state) {
  if (state >= n) throw std::out_of_range("point mass outside the state space");
  std::vector<double> p(n, 0.0);
  p[state] = 1.0;
  return Belief(std::move(p), Unchecked{});
}

double Belief::entropy() const {
  double h = 0.0;
  for (double p : probs_) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

Belief make_belief_unchecked(std::vector<double> probs) { return Belief(std::move(probs), Belief::Unchecked{}); }

Belief predict(const Belief& belief, const PomdpModel& model) {
  check_belief(belief, model);
  std::vector<double> out(belief.size());
  model.apply_transition_transposed(belief.probs(), out);
  return make_belief_unchecked(std::move(out));
}

double observation_marginal(const Belief& belief, const ActionVector& action,
                            const ObservationVector& obs, const PomdpModel& model) {
  const Belief predicted = predict(belief, model);
  const std::size_t a = model.actions().index_of(action);
  double total = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] != 0.0) total += model.obs_prob(i, a, obs.bits) * predicted[i];
  }
  return total;
}

Belief update_belief(const Belief& belief, const ActionVector& action, const ObservationVector& obs,
                     const PomdpModel& model) {
  check_belief(belief, model);
  const std::size_t a = model.actions().index_of(action);
  std::vector<double> post(belief.size());
  model.apply_transition_transposed(belief.probs(), post);
  double total = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    if (post[i] != 0.0) post[i] *= model.obs_prob(i, a, obs.bits);
    total += post[i];
  }
  if (!(total >= kMinMarginal)) {
    throw ZeroProbabilityObservation("observation has zero probability under the current belief");
  }
  for (double& p : post) p /= total;
  return make_belief_unchecked(std::move(post));
}

std::vector<double> expected_reward_vector(const ActionVector& action, const PomdpModel& model) {
  const auto r = model.reward_vector(model.actions().index_of(action));
  return {r.begin(), r.end()};
}

double expected_reward(const Belief& belief, const ActionVector& action, const PomdpModel& model) {
  check_belief(belief, model);
  const auto r = model.reward_vector(model.actions().index_of(action));
  return std::inner_product(r.begin(), r.end(), belief.probs().begin(), 0.0);
}

double slot_reward(const CompositeState& state, const ActionVector& action, const ObservationVector& obs,
                   const PomdpModel& model) {
  int detected = 0;
  for (std::size_t m = 0; m < action.size(); ++m) {
    if (obs[static_cast<int>(m)]) detected += count_bins(state, action.cols[m]);
  }
  return model.reward_for_bins(detected);
}

}  // namespace beampomdp
