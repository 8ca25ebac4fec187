// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace beampomdp {

/// Initial belief regime. `uniform`: the initial state is unknown and the
/// belief starts flat. `known`: the belief starts as a point mass on the
/// true initial state.
enum class PriorKind { uniform, known };

/// Slot reward. `path_count` credits detected non-zero bins; `mrc` uses
/// log(1 + N_p * gain_var) for N_p detected bins.
enum class RewardKind { path_count, mrc };

/// Channel, sensing and experiment parameters.
///
/// The on-disk form is a flat `key = value` text file whose keys are the
/// field names below. `#` starts a comment. Unlisted keys keep defaults.
struct ChannelConfig {
  int n_tx = 8;
  int n_rx = 4;
  int n_paths = 2;
  int n_pilots = 4;
  double beta = 0.5;
  int band = 1;
  double gain_var = 1.0;
  double noise_var = 1.0;
  double tx_power_db = 1.0;
  int horizon = 10;
  std::uint64_t seed = 1;

  PriorKind prior = PriorKind::known;
  RewardKind reward = RewardKind::path_count;
  /// Column false-alarm probability used to set the detector threshold.
  double false_alarm = 0.05;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Sorted `key = value` lines with round-trip exact numbers.
  std::string canonical_text() const;

  /// FNV-1a hash of canonical_text(); stamped into policy files.
  std::uint64_t hash() const;
};

ChannelConfig parse_config(std::istream& in);
ChannelConfig parse_config_string(const std::string& text);
ChannelConfig load_config(const std::filesystem::path& path);

std::string to_string(PriorKind kind);
std::string to_string(RewardKind kind);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace beampomdp
