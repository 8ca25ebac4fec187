// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------
//
// Pilot sensing chain: filter-bank output synthesis, per-column energy
// detection and the observation kernel shared with the belief engine.

#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "beampomdp/channel_dynamics.hpp"
#include "beampomdp/config.hpp"
#include "beampomdp/rng.hpp"

namespace beampomdp {

/// M_p distinct sensed columns in strictly ascending order.
struct ActionVector {
  std::vector<int> cols;

  /// Throws std::invalid_argument unless strictly ascending within [0, n_tx).
  static ActionVector make(std::vector<int> cols, int n_tx);

  std::size_t size() const { return cols.size(); }
  bool contains(int col) const;

  friend bool operator==(const ActionVector&, const ActionVector&) = default;
  friend auto operator<=>(const ActionVector&, const ActionVector&) = default;
};

/// All C(n_tx, n_pilots) actions in lexicographic order.
class ActionSpace {
 public:
  ActionSpace(int n_tx, int n_pilots);

  std::size_t size() const { return actions_.size(); }
  int n_tx() const { return n_tx_; }
  int n_pilots() const { return n_pilots_; }
  const ActionVector& operator[](std::size_t i) const { return actions_[i]; }
  /// Throws std::out_of_range for an action outside this space.
  std::size_t index_of(const ActionVector& action) const;

 private:
  int n_tx_;
  int n_pilots_;
  std::vector<ActionVector> actions_;
};

/// Per-pilot detection bits; bit m of `bits` is o_m. The bit pattern is
/// also the observation's index in [0, 2^size).
struct ObservationVector {
  std::uint32_t bits = 0;
  int size = 0;

  bool operator[](int m) const { return (bits >> m) & 1U; }
  friend bool operator==(const ObservationVector&, const ObservationVector&) = default;
};

/// Column detector summary: d[k] = Pr{column declared occupied | k paths}.
struct DetectorModel {
  std::vector<double> d;
  double tau = 0.0;
  double snr_eff = 0.0;
  int n_rx = 0;

  double detect(int bins) const { return d[static_cast<std::size_t>(bins)]; }
  int max_bins() const { return static_cast<int>(d.size()) - 1; }
  /// Per-bin noise-only exceedance, exp(-tau).
  double bin_false_alarm() const;

  /// Table-only detector (no physical threshold); used by the belief engine
  /// on hand-written models. Validates 0 <= d <= 1 and monotonicity.
  static DetectorModel from_table(std::vector<double> d);
};

/// Mean received bin energy over noise when a pilot hits a path's column:
/// 10^(tx_power_db/10) * n_tx * gain_var / noise_var.
double effective_snr(const ChannelConfig& cfg);

/// Per-bin threshold tau giving column false alarm `column_pfa` across n_rx bins.
double threshold_for_false_alarm(int n_rx, double column_pfa);

/// Energy detector |y_r|^2 > tau * noise_var on each of the n_rx bins, OR'd
/// per column. d[k] averages over the uniform AoA row assignment of the k
/// paths; paths sharing a row add coherently in that bin.
DetectorModel calibrate_detector(const ChannelConfig& cfg, double tau);

/// calibrate_detector at the threshold implied by cfg.false_alarm.
DetectorModel default_detector(const ChannelConfig& cfg);

void write_detector(std::ostream& out, const DetectorModel& det);
DetectorModel read_detector(std::istream& in);
void save_detector(const std::filesystem::path& path, const DetectorModel& det);
DetectorModel load_detector(const std::filesystem::path& path);

struct GainEstimate {
  int pilot = 0;
  int row = 0;
  int col = 0;
  std::complex<double> value;
};

struct SenseResult {
  ObservationVector obs;
  /// MMSE estimate of H^V(row, col) for every bin that fired.
  std::vector<GainEstimate> gains;
};

/// Simulates the filter-bank outputs of one slot's pilots and the
/// receiver's detections.
SenseResult sense_columns(const ChannelRealization& realization, const ActionVector& action,
                          const DetectorModel& detector, Rng& rng, const ChannelConfig& cfg);

/// Number of paths of `state` whose AoD column is `col`.
int count_bins(const CompositeState& state, int col);

/// q = Pr{obs | state, action}; pilots are conditionally independent.
double observation_prob(const CompositeState& state, const ActionVector& action,
                        const ObservationVector& obs, const DetectorModel& detector);

}  // namespace beampomdp
