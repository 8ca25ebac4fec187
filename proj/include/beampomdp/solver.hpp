// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------
//
// Exact finite-horizon value iteration over alpha vectors.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "beampomdp/belief.hpp"
#include "beampomdp/model.hpp"

namespace beampomdp {

struct AlphaVector {
  std::vector<double> values;
  std::size_t action = 0;  // index into the model's ActionSpace
};

/// Value function for slots 1..T. Slot k holds the vectors of V^k, the best
/// expected reward collectable from slot k through T.
class AlphaVectorSet {
 public:
  AlphaVectorSet() = default;
  AlphaVectorSet(std::size_t n_states, std::size_t n_actions, std::uint64_t config_hash,
                 std::vector<std::vector<AlphaVector>> slots);

  int horizon() const { return static_cast<int>(slots_.size()); }
  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  std::uint64_t config_hash() const { return config_hash_; }

  /// Vectors of slot k, 1-based.
  const std::vector<AlphaVector>& slot(int k) const;
  std::size_t total_vectors() const;

  /// max over slot-k vectors of <alpha, belief>.
  double value(std::span<const double> belief, int k) const;
  /// Index (within slot k) of the maximising vector; ties within 1e-12
  /// go to the lexicographically smallest action.
  std::size_t best_vector(std::span<const double> belief, int k) const;

 private:
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::uint64_t config_hash_ = 0;
  std::vector<std::vector<AlphaVector>> slots_;
};

struct SolverOptions {
  /// A vector survives witness pruning only if it beats the rest by more
  /// than this somewhere on the simplex.
  double prune_tolerance = 1e-9;
  /// Guard on |A| * |O| * |V^{k+1}| per backup stage.
  double stage_budget = 1e8;
  /// Guard on the size of any single cross-sum inside a backup.
  double max_candidates = 2e4;
  /// Worker threads for the per-action backups (0 = hardware concurrency).
  int workers = 1;
  /// Progress lines to stderr per stage.
  bool verbose = false;
  // Point-based backups (PBVI/SARSOP style) would be selected here; only the
  // exact incremental-pruning backup exists.
};

/// Backward induction from the terminal slot (one vector per action,
/// R(a)) to slot 1 with cross-sum backups and incremental pruning.
/// Throws BudgetExceeded when a stage exceeds options.stage_budget or a
/// cross-sum exceeds options.max_candidates.
AlphaVectorSet solve_finite_horizon(const PomdpModel& model, int horizon,
                                    const SolverOptions& options = {});

/// Removes pointwise-dominated vectors, then every vector that is not
/// strictly best (by more than `tolerance`) at some belief. The result is
/// ordered by action index.
std::vector<AlphaVector> prune(std::vector<AlphaVector> vectors, double tolerance = 1e-9);

/// Only the pointwise-dominance pass of prune().
std::vector<AlphaVector> prune_dominated(std::vector<AlphaVector> vectors);

/// Action of the maximising slot-k vector.
ActionVector optimal_action(const Belief& belief, int k, const AlphaVectorSet& avs,
                            const PomdpModel& model);

void write_alpha_vectors(std::ostream& out, const AlphaVectorSet& avs);
AlphaVectorSet read_alpha_vectors(std::istream& in);
void save_alpha_vectors(const std::filesystem::path& path, const AlphaVectorSet& avs);
AlphaVectorSet load_alpha_vectors(const std::filesystem::path& path);

}  // namespace beampomdp
