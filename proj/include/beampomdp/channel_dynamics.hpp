// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------
//
// Virtual-channel state space and its Markov random walk over AoD columns.
// Columns, rows and paths are 0-based throughout the library.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "beampomdp/config.hpp"
#include "beampomdp/rng.hpp"

namespace beampomdp {

/// Single-path column transition matrix, row-stochastic, stored row-major.
class TransitionModel {
 public:
  /// Validates shape, non-negativity and unit row sums (1e-12).
  static TransitionModel from_matrix(int n, std::vector<double> row_major);

  int size() const { return n_; }
  double operator()(int from, int to) const { return p_[static_cast<std::size_t>(from) * n_ + to]; }
  std::span<const double> row(int from) const {
    return {p_.data() + static_cast<std::size_t>(from) * n_, static_cast<std::size_t>(n_)};
  }
  /// Largest |i - j| with a non-zero entry.
  int bandwidth() const { return bandwidth_; }

 private:
  TransitionModel(int n, std::vector<double> p);

  int n_ = 0;
  int bandwidth_ = 0;
  std::vector<double> p_;
};

/// Banded random-walk matrix: weight alpha*beta^|d| for column offsets
/// |d| <= band, alpha normalising the full band. Offsets that fall past
/// the first or last column are folded onto that boundary column.
TransitionModel build_banded_transition(int n_tx, double beta, int band);

/// L path columns plus the state's index in the canonical enumeration.
struct CompositeState {
  std::vector<int> cols;
  std::size_t index = 0;

  friend bool operator==(const CompositeState&, const CompositeState&) = default;
};

/// Enumeration of all n_tx^n_paths composite states. Mixed radix, base
/// n_tx, path 0 most significant.
class StateSpace {
 public:
  static constexpr std::size_t kMaxStates = 10'000'000;

  /// Throws BudgetExceeded when n_tx^n_paths > kMaxStates.
  StateSpace(int n_tx, int n_paths);

  std::size_t size() const { return size_; }
  int n_tx() const { return n_tx_; }
  int n_paths() const { return n_paths_; }

  std::size_t index_of(std::span<const int> cols) const;
  CompositeState state(std::size_t index) const;
  int column(std::size_t index, int path) const {
    return columns_[index * static_cast<std::size_t>(n_paths_) + path];
  }
  /// Number of paths of state `index` sitting in column `col`.
  int occupancy(std::size_t index, int col) const {
    return occupancy_[index * static_cast<std::size_t>(n_tx_) + col];
  }
  /// Stride of path `path` in the flat index.
  std::size_t stride(int path) const { return strides_[path]; }

 private:
  int n_tx_;
  int n_paths_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
  std::vector<int> columns_;
  std::vector<std::uint8_t> occupancy_;
};

/// Ordered list of all states; a thin convenience over StateSpace.
std::vector<CompositeState> enumerate_states(int n_tx, int n_paths);

/// Product over paths of p(from_l, to_l).
double composite_transition_prob(const CompositeState& from, const CompositeState& to,
                                 const TransitionModel& tm);

/// Moves each path independently according to its row of `tm`.
CompositeState step_state(const CompositeState& state, const TransitionModel& tm,
                          const StateSpace& space, Rng& rng);

/// AoA rows for one episode, uniform and independent per path.
std::vector<int> draw_rows(int n_paths, int n_rx, Rng& rng);

/// Dense N_r x N_t beamspace matrix, row-major.
struct VirtualChannel {
  int n_rx = 0;
  int n_tx = 0;
  std::vector<std::complex<double>> entries;

  std::complex<double> at(int row, int col) const {
    return entries[static_cast<std::size_t>(row) * n_tx + col];
  }
  std::size_t nonzeros() const;
  /// Number of non-zero entries in column `col`.
  int column_l0(int col) const;
};

/// One slot of the channel: composite state, per-episode AoA rows and
/// per-slot complex path gains.
struct ChannelRealization {
  CompositeState state;
  std::vector<int> rows;
  std::vector<std::complex<double>> gains;

  /// Gains of paths sharing a (row, col) bin add coherently.
  VirtualChannel matrix(int n_rx, int n_tx) const;
};

/// Draws fresh CN(0, gain_var) gains for `state` with the given rows.
ChannelRealization realize_channel(const CompositeState& state, std::span<const int> rows,
                                   Rng& rng, const ChannelConfig& cfg);

}  // namespace beampomdp
