// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace beampomdp {

/// Malformed or inconsistent configuration (file syntax, out-of-range fields).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a Bayes update is asked to condition on an observation whose
/// marginal probability is (numerically) zero under the current belief.
class ZeroProbabilityObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size guard tripped (state space, solver stage, decision-tree oracle).
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beampomdp
