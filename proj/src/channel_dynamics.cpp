// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/channel_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "beampomdp/errors.hpp"

namespace beampomdp {

TransitionModel::TransitionModel(int n, std::vector<double> p) : n_(n), p_(std::move(p)) {
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if ((*this)(i, j) != 0.0) bandwidth_ = std::max(bandwidth_, std::abs(i - j));
    }
  }
}

TransitionModel TransitionModel::from_matrix(int n, std::vector<double> row_major) {
  if (n < 1) throw std::invalid_argument("transition matrix needs at least one column");
  if (row_major.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("transition matrix must be n x n");
  }
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p = row_major[static_cast<std::size_t>(i) * n + j];
      if (!(p >= 0.0) || p > 1.0) {
        throw std::invalid_argument("transition probability out of [0, 1] at row " + std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("transition row " + std::to_string(i) + " does not sum to one");
    }
  }
  return TransitionModel(n, std::move(row_major));
}

TransitionModel build_banded_transition(int n_tx, double beta, int band) {
  if (n_tx < 1) throw std::invalid_argument("n_tx must be positive");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
  if (band < 0 || band >= n_tx) throw std::invalid_argument("band must satisfy 0 <= band < n_tx");

  // weight[d] = alpha * beta^d, alpha normalising the two-sided band.
  std::vector<double> weight(static_cast<std::size_t>(band) + 1);
  double total = 1.0;
  double power = 1.0;
  for (int d = 1; d <= band; ++d) {
    power *= beta;
    total += 2.0 * power;
  }
  const double alpha = 1.0 / total;
  power = 1.0;
  for (int d = 0; d <= band; ++d) {
    weight[d] = alpha * power;
    power *= beta;
  }

  std::vector<double> p(static_cast<std::size_t>(n_tx) * n_tx, 0.0);
  for (int i = 0; i < n_tx; ++i) {
    double* row = p.data() + static_cast<std::size_t>(i) * n_tx;
    for (int d = -band; d <= band; ++d) {
      const int j = std::clamp(i + d, 0, n_tx - 1);
      row[j] += weight[std::abs(d)];
    }
    // The boundary entry takes whatever the in-range entries leave, so the
    // row sums to one exactly as written in closed form.
    const int lo = std::max(0, i - band);
    const int hi = std::min(n_tx - 1, i + band);
    if (lo == 0 && i - band < 0) {
      double rest = 0.0;
      for (int j = 1; j < n_tx; ++j) rest += row[j];
      row[0] = 1.0 - rest;
    } else if (hi == n_tx - 1 && i + band > n_tx - 1) {
      double rest = 0.0;
      for (int j = 0; j < n_tx - 1; ++j) rest += row[j];
      row[n_tx - 1] = 1.0 - rest;
    }
  }
  return TransitionModel::from_matrix(n_tx, std::move(p));
}

StateSpace::StateSpace(int n_tx, int n_paths) : n_tx_(n_tx), n_paths_(n_paths), size_(1) {
  if (n_tx < 1 || n_paths < 1) throw std::invalid_argument("state space needs n_tx >= 1 and n_paths >= 1");
  for (int l = 0; l < n_paths; ++l) {
    if (size_ > kMaxStates / static_cast<std::size_t>(n_tx)) {
      throw BudgetExceeded("state space n_tx^n_paths exceeds " + std::to_string(kMaxStates));
    }
    size_ *= static_cast<std::size_t>(n_tx);
  }
  strides_.assign(n_paths, 1);
  for (int l = n_paths - 2; l >= 0; --l) strides_[l] = strides_[l + 1] * n_tx;

  columns_.resize(size_ * n_paths);
  occupancy_.assign(size_ * n_tx, 0);
  for (std::size_t s = 0; s < size_; ++s) {
    for (int l = 0; l < n_paths; ++l) {
      const int col = static_cast<int>((s / strides_[l]) % n_tx);
      columns_[s * n_paths + l] = col;
      ++occupancy_[s * n_tx + col];
    }
  }
}

std::size_t StateSpace::index_of(std::span<const int> cols) const {
  if (cols.size() != static_cast<std::size_t>(n_paths_)) {
    throw std::invalid_argument("state has the wrong number of paths");
  }
  std::size_t index = 0;
  for (int l = 0; l < n_paths_; ++l) {
    if (cols[l] < 0 || cols[l] >= n_tx_) throw std::out_of_range("column index out of range");
    index += strides_[l] * static_cast<std::size_t>(cols[l]);
  }
  return index;
}

CompositeState StateSpace::state(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("state index out of range");
  CompositeState s;
  s.index = index;
  s.cols.assign(columns_.begin() + index * n_paths_, columns_.begin() + (index + 1) * n_paths_);
  return s;
}

std::vector<CompositeState> enumerate_states(int n_tx, int n_paths) {
  const StateSpace space(n_tx, n_paths);
  std::vector<CompositeState> out;
  out.reserve(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) out.push_back(space.state(s));
  return out;
}

double composite_transition_prob(const CompositeState& from, const CompositeState& to,
                                 const TransitionModel& tm) {
  double p = 1.0;
  for (std::size_t l = 0; l < from.cols.size(); ++l) p *= tm(from.cols[l], to.cols[l]);
  return p;
}

CompositeState step_state(const CompositeState& state, const TransitionModel& tm,
                          const StateSpace& space, Rng& rng) {
  CompositeState next;
  next.cols.resize(state.cols.size());
  for (std::size_t l = 0; l < state.cols.size(); ++l) {
    next.cols[l] = sample_discrete(tm.row(state.cols[l]), rng);
  }
  next.index = space.index_of(next.cols);
  return next;
}

std::vector<int> draw_rows(int n_paths, int n_rx, Rng& rng) {
  std::vector<int> rows(n_paths);
  for (auto& r : rows) r = uniform_index(rng, n_rx);
  return rows;
}

std::size_t VirtualChannel::nonzeros() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](auto z) { return z != 0.0; }));
}

int VirtualChannel::column_l0(int col) const {
  int count = 0;
  for (int r = 0; r < n_rx; ++r) count += at(r, col) != 0.0 ? 1 : 0;
  return count;
}

VirtualChannel ChannelRealization::matrix(int n_rx, int n_tx) const {
  VirtualChannel h{n_rx, n_tx, std::vector<std::complex<double>>(static_cast<std::size_t>(n_rx) * n_tx)};
  for (std::size_t l = 0; l < gains.size(); ++l) {
    h.entries[static_cast<std::size_t>(rows[l]) * n_tx + state.cols[l]] += gains[l];
  }
  return h;
}

ChannelRealization realize_channel(const CompositeState& state, std::span<const int> rows,
                                   Rng& rng, const ChannelConfig& cfg) {
  if (rows.size() != state.cols.size()) throw std::invalid_argument("one AoA row per path required");
  ChannelRealization out;
  out.state = state;
  out.rows.assign(rows.begin(), rows.end());
  out.gains.reserve(rows.size());
  for (std::size_t l = 0; l < rows.size(); ++l) out.gains.push_back(complex_gaussian(rng, cfg.gain_var));
  return out;
}

}  // namespace beampomdp
