// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "beampomdp/errors.hpp"

namespace beampomdp {

EpisodeLog run_episode(const PomdpModel& model, Policy& policy, Rng& rng, const EpisodeOptions& options) {
  const ChannelConfig& cfg = model.config();
  const StateSpace& states = model.states();

  std::vector<int> cols(static_cast<std::size_t>(cfg.n_paths));
  for (int& c : cols) c = uniform_index(rng, cfg.n_tx);
  CompositeState state = states.state(states.index_of(cols));
  const std::vector<int> rows = draw_rows(cfg.n_paths, cfg.n_rx, rng);

  Belief belief = cfg.prior == PriorKind::known ? Belief::point_mass(states.size(), state.index)
                                                : Belief::uniform(states.size());
  policy.begin_episode(state);

  EpisodeLog log;
  log.initial_state = state.index;
  log.slots.reserve(static_cast<std::size_t>(cfg.horizon));
  double total = 0.0;
  for (int k = 1; k <= cfg.horizon; ++k) {
    if (options.keep_beliefs) log.beliefs.emplace_back(belief.probs().begin(), belief.probs().end());
    SlotRecord rec;
    rec.belief_entropy = belief.entropy();

    state = step_state(state, model.transition(), states, rng);
    rec.action = policy.choose(belief, k, rng);
    const ChannelRealization channel = realize_channel(state, rows, rng, cfg);
    const SenseResult feedback = sense_columns(channel, rec.action, model.detector(), rng, cfg);
    rec.state = state.index;
    rec.obs = feedback.obs;
    rec.reward = slot_reward(state, rec.action, feedback.obs, model);

    policy.observe(rec.action, feedback);
    belief = update_belief(belief, rec.action, feedback.obs, model);

    total += rec.reward;
    log.accumulated.push_back(total);
    log.slots.push_back(std::move(rec));
  }
  if (options.keep_beliefs) log.beliefs.emplace_back(belief.probs().begin(), belief.probs().end());
  return log;
}

RunSummary monte_carlo(const PomdpModel& model, const Policy& policy, std::size_t episodes, int workers,
                       std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("need at least one episode");
  const std::size_t horizon = static_cast<std::size_t>(model.config().horizon);
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::size_t>(episodes, 1024))));

  // rewards[e * T + k]; filled by whichever worker owns episode e.
  std::vector<double> rewards(episodes * horizon);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto run = [&](int worker) {
    try {
      auto cursor = policy.clone();
      for (std::size_t e = static_cast<std::size_t>(worker); e < episodes; e += static_cast<std::size_t>(workers)) {
        Rng rng = make_substream(seed, e);
        const EpisodeLog log = run_episode(model, *cursor, rng);
        for (std::size_t k = 0; k < horizon; ++k) rewards[e * horizon + k] = log.slots[k].reward;
      }
    } catch (...) {
      errors[static_cast<std::size_t>(worker)] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  RunSummary out;
  out.episodes = episodes;
  out.config_hash = model.config().hash();
  out.seed = seed;
  const double n = static_cast<double>(episodes);
  auto half_width = [&](double sum, double sum_sq) {
    if (episodes < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return 1.96 * std::sqrt(var) / std::sqrt(n);
  };
  // Reduction in episode order keeps the result independent of `workers`.
  std::vector<double> accum(episodes, 0.0);
  for (std::size_t k = 0; k < horizon; ++k) {
    double sum = 0.0, sum_sq = 0.0, acc_sum = 0.0, acc_sq = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
      const double r = rewards[e * horizon + k];
      sum += r;
      sum_sq += r * r;
      accum[e] += r;
      acc_sum += accum[e];
      acc_sq += accum[e] * accum[e];
    }
    out.mean_reward.push_back(sum / n);
    out.ci95.push_back(half_width(sum, sum_sq));
    out.accum_reward.push_back(acc_sum / n);
    out.accum_ci95.push_back(half_width(acc_sum, acc_sq));
  }
  return out;
}

void write_csv(std::ostream& out, const RunSummary& summary) {
  out << "slot,mean_reward,ci95,accum_reward\n";
  for (std::size_t k = 0; k < summary.mean_reward.size(); ++k) {
    out << (k + 1) << ',' << format_double(summary.mean_reward[k]) << ',' << format_double(summary.ci95[k])
        << ',' << format_double(summary.accum_reward[k]) << '\n';
  }
}

namespace {

// Decision-tree evaluation written directly from the definitions: explicit
// composite transition sums, per-state observation probabilities and the
// slot reward r(s, a, o). Shares no code with the alpha-vector backup.
class DecisionTree {
 public:
  DecisionTree(const PomdpModel& model)
      : model_(model), states_(enumerate_states(model.config().n_tx, model.config().n_paths)) {
    const std::size_t n = states_.size();
    transition_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        transition_[i * n + j] = composite_transition_prob(states_[i], states_[j], model.transition());
      }
    }
  }

  // Value of each root action at `belief` with `slots` slots to go.
  std::vector<double> action_values(const std::vector<double>& belief, int slots) const {
    const std::size_t n = states_.size();
    std::vector<double> predicted(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (belief[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) predicted[j] += belief[i] * transition_[i * n + j];
    }
    const auto& actions = model_.actions();
    std::vector<double> values(actions.size(), 0.0);
    std::vector<double> joint(n);
    for (std::size_t a = 0; a < actions.size(); ++a) {
      double value = 0.0;
      for (std::uint32_t o = 0; o < model_.n_observations(); ++o) {
        const ObservationVector obs{o, static_cast<int>(actions[a].size())};
        double gamma = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          joint[j] = predicted[j] == 0.0 ? 0.0
                                         : predicted[j] * observation_prob(states_[j], actions[a], obs,
                                                                           model_.detector());
          gamma += joint[j];
          value += joint[j] * slot_reward(states_[j], actions[a], obs, model_);
        }
        if (slots > 1 && gamma > 0.0) {
          std::vector<double> posterior(n);
          for (std::size_t j = 0; j < n; ++j) posterior[j] = joint[j] / gamma;
          value += gamma * best_value(posterior, slots - 1);
        }
      }
      values[a] = value;
    }
    return values;
  }

  double best_value(const std::vector<double>& belief, int slots) const {
    const auto values = action_values(belief, slots);
    return *std::max_element(values.begin(), values.end());
  }

 private:
  const PomdpModel& model_;
  std::vector<CompositeState> states_;
  std::vector<double> transition_;
};

void check_tree_budget(const PomdpModel& model, int horizon, double max_leaves) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const double branching = static_cast<double>(model.actions().size()) * static_cast<double>(model.n_observations());
  if (horizon * std::log(branching) > std::log(max_leaves)) {
    throw BudgetExceeded("decision tree with " + std::to_string(branching) + "^" + std::to_string(horizon) +
                         " leaves exceeds the budget");
  }
}

}  // namespace

double brute_force_value(const PomdpModel& model, const Belief& initial, int horizon, double max_leaves) {
  return brute_force_decision(model, initial, horizon, max_leaves).value;
}

TreeDecision brute_force_decision(const PomdpModel& model, const Belief& initial, int horizon, double max_leaves) {
  check_tree_budget(model, horizon, max_leaves);
  if (initial.size() != model.n_states()) throw std::invalid_argument("belief length does not match the model");
  const DecisionTree tree(model);
  const auto values = tree.action_values({initial.probs().begin(), initial.probs().end()}, horizon);

  TreeDecision out;
  out.value = *std::max_element(values.begin(), values.end());
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] >= out.value - 1e-12) {
      out.action = a;
      break;
    }
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (a != out.action) second = std::max(second, values[a]);
  }
  out.margin = values.size() > 1 ? out.value - second : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace beampomdp
