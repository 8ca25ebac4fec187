// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace beampomdp {

using Rng = std::mt19937_64;

/// One step of the SplitMix64 generator; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent generator for work item `stream` derived from `master`.
/// The result depends only on (master, stream), never on scheduling.
Rng make_substream(std::uint64_t master, std::uint64_t stream);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

/// Uniform integer in [0, n).
int uniform_index(Rng& rng, int n);

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
std::complex<double> complex_gaussian(Rng& rng, double variance);

/// Inverse-CDF draw from a discrete distribution given by `weights`
/// (assumed to sum to one). Never returns an index with zero weight.
int sample_discrete(std::span<const double> weights, Rng& rng);

}  // namespace beampomdp
