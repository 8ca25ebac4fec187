// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace beampomdp {

namespace {

// Applies the single-path matrix along one axis of the state tensor.
// transposed == false: out[n] = sum_i p(n, i) in[i]  (value backup)
// transposed == true:  out[j] = sum_i p(i, j) in[i]  (belief prediction)
void apply_axis(const TransitionModel& tm, std::size_t stride, std::span<const double> in,
                std::span<double> out, bool transposed) {
  const int n_tx = tm.size();
  const int band = tm.bandwidth();
  const std::size_t block = stride * static_cast<std::size_t>(n_tx);
  for (std::size_t base = 0; base < in.size(); base += block) {
    for (int a = 0; a < n_tx; ++a) {
      double* dst = out.data() + base + static_cast<std::size_t>(a) * stride;
      std::fill(dst, dst + stride, 0.0);
      const int lo = std::max(0, a - band);
      const int hi = std::min(n_tx - 1, a + band);
      for (int b = lo; b <= hi; ++b) {
        const double p = transposed ? tm(b, a) : tm(a, b);
        if (p == 0.0) continue;
        const double* src = in.data() + base + static_cast<std::size_t>(b) * stride;
        for (std::size_t t = 0; t < stride; ++t) dst[t] += p * src[t];
      }
    }
  }
}

void apply_composite(const TransitionModel& tm, const StateSpace& states, std::span<const double> in,
                     std::span<double> out, bool transposed) {
  if (in.size() != states.size() || out.size() != states.size()) {
    throw std::invalid_argument("vector length does not match the state space");
  }
  const int paths = states.n_paths();
  if (paths == 1) {
    apply_axis(tm, 1, in, out, transposed);
    return;
  }
  std::vector<double> scratch(in.size());
  // Ping-pong so the final axis lands in `out`.
  std::span<double> bufs[2] = {out, scratch};
  int target = (paths % 2 == 1) ? 0 : 1;
  std::span<const double> src = in;
  for (int l = 0; l < paths; ++l) {
    apply_axis(tm, states.stride(l), src, bufs[target], transposed);
    src = bufs[target];
    target ^= 1;
  }
}

}  // namespace

PomdpModel::PomdpModel(const ChannelConfig& cfg, TransitionModel tm, DetectorModel detector)
    : cfg_(cfg),
      tm_(std::move(tm)),
      detector_(std::move(detector)),
      states_(cfg.n_tx, cfg.n_paths),
      actions_(cfg.n_tx, cfg.n_pilots) {
  cfg_.validate();
  if (tm_.size() != cfg_.n_tx) throw std::invalid_argument("transition model size differs from n_tx");
  if (detector_.max_bins() < cfg_.n_paths) {
    throw std::invalid_argument("detector table must cover 0..n_paths bins");
  }

  const std::size_t n = states_.size();
  rewards_.resize(actions_.size() * n);
  std::vector<double> post(n);
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    for (std::size_t i = 0; i < n; ++i) post[i] = post_transition_reward(i, a);
    apply_transition(post, std::span<double>(rewards_.data() + a * n, n));
  }

  std::string text = "n_tx=" + std::to_string(cfg_.n_tx) + ";n_rx=" + std::to_string(cfg_.n_rx) +
                     ";n_paths=" + std::to_string(cfg_.n_paths) + ";n_pilots=" + std::to_string(cfg_.n_pilots) +
                     ";gain_var=" + format_double(cfg_.gain_var) + ";reward=" + to_string(cfg_.reward) + ";P=";
  for (int i = 0; i < tm_.size(); ++i) {
    for (double p : tm_.row(i)) text += format_double(p) + ",";
  }
  text += ";d=";
  for (double p : detector_.d) text += format_double(p) + ",";
  fingerprint_ = fnv1a64(text);
}

PomdpModel PomdpModel::from_config(const ChannelConfig& cfg) {
  cfg.validate();
  return PomdpModel(cfg, build_banded_transition(cfg.n_tx, cfg.beta, cfg.band), default_detector(cfg));
}

std::span<const double> PomdpModel::reward_vector(std::size_t action) const {
  const std::size_t n = states_.size();
  return {rewards_.data() + action * n, n};
}

void PomdpModel::apply_transition(std::span<const double> v, std::span<double> out) const {
  apply_composite(tm_, states_, v, out, false);
}

void PomdpModel::apply_transition_transposed(std::span<const double> pi, std::span<double> out) const {
  apply_composite(tm_, states_, pi, out, true);
}

double PomdpModel::obs_prob(std::size_t state, std::size_t action, std::uint32_t obs) const {
  const auto& cols = actions_[action].cols;
  double q = 1.0;
  for (std::size_t m = 0; m < cols.size(); ++m) {
    const double d = detector_.detect(states_.occupancy(state, cols[m]));
    q *= ((obs >> m) & 1U) ? d : 1.0 - d;
  }
  return q;
}

void PomdpModel::obs_likelihood(std::size_t action, std::uint32_t obs, std::span<double> out) const {
  for (std::size_t s = 0; s < states_.size(); ++s) out[s] = obs_prob(s, action, obs);
}

double PomdpModel::reward_for_bins(int detected_bins) const {
  if (cfg_.reward == RewardKind::mrc) return std::log1p(detected_bins * cfg_.gain_var);
  return static_cast<double>(detected_bins);
}

double PomdpModel::post_transition_reward(std::size_t state, std::size_t action) const {
  const auto& cols = actions_[action].cols;
  if (cfg_.reward == RewardKind::path_count) {
    double r = 0.0;
    for (int col : cols) {
      const int k = states_.occupancy(state, col);
      if (k > 0) r += detector_.detect(k) * k;
    }
    return r;
  }
  // Distribution of the detected-bin count across independent pilots.
  std::vector<double> dist(static_cast<std::size_t>(cfg_.n_paths) + 1, 0.0);
  dist[0] = 1.0;
  for (int col : cols) {
    const int k = states_.occupancy(state, col);
    if (k == 0) continue;
    const double d = detector_.detect(k);
    for (int c = cfg_.n_paths; c >= 0; --c) {
      const double stay = dist[c] * (1.0 - d);
      const double moved = c >= k ? dist[c - k] * d : 0.0;
      dist[c] = stay + moved;
    }
  }
  double r = 0.0;
  for (std::size_t c = 0; c < dist.size(); ++c) r += dist[c] * reward_for_bins(static_cast<int>(c));
  return r;
}

}  // namespace beampomdp
