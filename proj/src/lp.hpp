// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#pragma once

#include <optional>
#include <span>
#include <vector>

namespace beampomdp::detail {

/// Looks for a belief b on the simplex with
///   <w, b> - max_u <u, b> > tolerance   over all u in `others`.
/// Returns the belief maximising that advantage, or nullopt when the best
/// advantage does not exceed `tolerance`. `others` must be non-empty.
std::optional<std::vector<double>> find_witness(std::span<const double> w,
                                                std::span<const std::span<const double>> others,
                                                double tolerance);

}  // namespace beampomdp::detail
